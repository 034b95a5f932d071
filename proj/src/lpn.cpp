#include "ironman/lpn.hpp"

#include <stdexcept>

namespace ironman {

void LpnParams::validate(std::size_t effective_ell) const {
    const std::size_t el = effective_ell == 0 ? ell : effective_ell;
    if (n == 0 || k == 0 || t == 0 || ell == 0 || d < 1)
        throw config_error("LpnParams: all parameters must be positive");
    if (k >= n) throw config_error("LpnParams: k must be < n");
    if (t * el < n) throw config_error("LpnParams: t*ell must cover n");
    if (static_cast<std::size_t>(d) > k) throw config_error("LpnParams: row weight exceeds k");
}

MatrixRowStream::MatrixRowStream(Block seed, std::size_t k, int d)
    : stream_(seed), draw_(static_cast<std::uint32_t>(k)), k_(k), d_(d) {
    if (static_cast<std::size_t>(d) > k) throw config_error("MatrixRowStream: d > k");
}

void MatrixRowStream::next_row(std::span<std::uint32_t> out) {
    for (int i = 0; i < d_; ++i) {
        std::uint32_t v;
        bool dup;
        do {
            v = draw_.next(stream_);
            dup = false;
            for (int j = 0; j < i; ++j)
                if (out[static_cast<std::size_t>(j)] == v) {
                    dup = true;
                    break;
                }
        } while (dup);
        out[static_cast<std::size_t>(i)] = v;
    }
}

SparseMatrix gen_matrix(Block seed, std::size_t n, std::size_t k, int d) {
    if (static_cast<std::size_t>(d) > k) throw config_error("gen_matrix: d > k");
    SparseMatrix a;
    a.n = n;
    a.k = k;
    a.d = d;
    a.colidx.resize(n * static_cast<std::size_t>(d));
    MatrixRowStream rows(seed, k, d);
    for (std::size_t i = 0; i < n; ++i)
        rows.next_row({a.colidx.data() + i * static_cast<std::size_t>(d),
                       static_cast<std::size_t>(d)});
    return a;
}

SparseMatrix gen_matrix(Block seed, const LpnParams& params) {
    return gen_matrix(seed, params.n, params.k, params.d);
}

std::vector<Block> encode_blocks(const SparseMatrix& a, std::span<const Block> vec,
                                 std::span<const Block> addend) {
    if (vec.size() != a.k) throw std::invalid_argument("encode_blocks: vector length != k");
    if (addend.size() != a.n) throw std::invalid_argument("encode_blocks: addend length != n");
    std::vector<Block> out(addend.begin(), addend.end());
    const std::uint32_t* idx = a.colidx.data();
    for (std::size_t i = 0; i < a.n; ++i) {
        Block acc = out[i];
        for (int j = 0; j < a.d; ++j) acc ^= vec[*idx++];
        out[i] = acc;
    }
    return out;
}

BitVec encode_bits(const SparseMatrix& a, const BitVec& bits, const BitVec& addend) {
    if (bits.size() != a.k) throw std::invalid_argument("encode_bits: vector length != k");
    if (addend.size() != a.n) throw std::invalid_argument("encode_bits: addend length != n");
    BitVec out = addend;
    const std::uint32_t* idx = a.colidx.data();
    for (std::size_t i = 0; i < a.n; ++i) {
        int acc = 0;
        for (int j = 0; j < a.d; ++j) acc ^= bits.get(*idx++) ? 1 : 0;
        if (acc) out.flip(i);
    }
    return out;
}

std::vector<Block> encode_sorted(const SortedCsr& s, std::span<const Block> vec,
                                 std::span<const Block> addend) {
    if (s.colidx.size() != s.rowidx.size())
        throw std::invalid_argument("encode_sorted: schedule arrays length mismatch");
    if (vec.size() != s.k) throw std::invalid_argument("encode_sorted: vector length != k");
    if (addend.size() != s.n) throw std::invalid_argument("encode_sorted: addend length != n");
    std::vector<Block> out(addend.begin(), addend.end());
    for (std::size_t e = 0; e < s.colidx.size(); ++e) out[s.rowidx[e]] ^= vec[s.colidx[e]];
    return out;
}

BitVec encode_sorted_bits(const SortedCsr& s, const BitVec& bits, const BitVec& addend) {
    if (s.colidx.size() != s.rowidx.size())
        throw std::invalid_argument("encode_sorted_bits: schedule arrays length mismatch");
    if (bits.size() != s.k) throw std::invalid_argument("encode_sorted_bits: vector length != k");
    if (addend.size() != s.n) throw std::invalid_argument("encode_sorted_bits: addend length != n");
    BitVec out = addend;
    for (std::size_t e = 0; e < s.colidx.size(); ++e)
        if (bits.get(s.colidx[e])) out.flip(s.rowidx[e]);
    return out;
}

std::vector<Block> permute_vector(std::span<const Block> in, std::span<const std::uint32_t> perm) {
    if (in.size() != perm.size()) throw std::invalid_argument("permute_vector: length mismatch");
    std::vector<Block> out(in.size());
    for (std::size_t p = 0; p < perm.size(); ++p) out[p] = in[perm[p]];
    return out;
}

BitVec permute_bits(const BitVec& in, std::span<const std::uint32_t> perm) {
    if (in.size() != perm.size()) throw std::invalid_argument("permute_bits: length mismatch");
    BitVec out(in.size());
    for (std::size_t p = 0; p < perm.size(); ++p) out.set(p, in.get(perm[p]));
    return out;
}

}  // namespace ironman
