#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ironman/block.hpp"
#include "ironman/prg.hpp"

namespace ironman {

struct LpnParams {
    std::size_t n = 0;    ///< output length
    std::size_t k = 0;    ///< base length
    std::size_t t = 0;    ///< tree count
    std::size_t ell = 0;  ///< leaves per tree
    int d = 10;           ///< row weight

    /// Protocol-facing sanity check. `effective_ell` overrides ell when the
    /// engine rounds the tree size up for 4-ary expansion; 0 keeps ell.
    void validate(std::size_t effective_ell = 0) const;
};

/// Fixed index matrix A, n rows by k columns, exactly d distinct column
/// indices per row, stored flat row-major.
struct SparseMatrix {
    std::size_t n = 0, k = 0;
    int d = 0;
    std::vector<std::uint32_t> colidx;  // n*d entries

    std::span<const std::uint32_t> row(std::size_t i) const {
        return {colidx.data() + i * static_cast<std::size_t>(d), static_cast<std::size_t>(d)};
    }
};

/// Locality-sorted entry schedule. perm maps new vector position -> original
/// column; (rowidx[e], colidx[e]) pairs route each scheduled access back to
/// its output row. colidx holds positions in the permuted vector.
struct SortedCsr {
    std::size_t n = 0, k = 0;
    int d = 0;
    std::uint32_t window = 1;
    std::vector<std::uint32_t> perm;
    std::vector<std::uint32_t> colidx;
    std::vector<std::uint32_t> rowidx;
};

/// Deterministic row generator; gen_matrix collects it. Within a row,
/// duplicate indices are resampled so every row has exactly d distinct
/// entries.
class MatrixRowStream {
public:
    MatrixRowStream(Block seed, std::size_t k, int d);
    void next_row(std::span<std::uint32_t> out);

private:
    PrgStream stream_;
    BoundedDraw draw_;
    std::size_t k_;
    int d_;
};

SparseMatrix gen_matrix(Block seed, const LpnParams& params);
SparseMatrix gen_matrix(Block seed, std::size_t n, std::size_t k, int d);

/// out[i] = addend[i] ⊕ (XOR of vec[j] over row i's columns).
std::vector<Block> encode_blocks(const SparseMatrix& a, std::span<const Block> vec,
                                 std::span<const Block> addend);

/// Bitwise analogue of encode_blocks over GF(2).
BitVec encode_bits(const SparseMatrix& a, const BitVec& bits, const BitVec& addend);

/// Sorted-schedule encode; `vec` must already be permuted by s.perm
/// (vec[p] = original[s.perm[p]]). Bit-identical to encode_blocks on the
/// source matrix.
std::vector<Block> encode_sorted(const SortedCsr& s, std::span<const Block> vec,
                                 std::span<const Block> addend);
BitVec encode_sorted_bits(const SortedCsr& s, const BitVec& bits, const BitVec& addend);

/// Applies perm to a length-k vector: out[p] = in[perm[p]].
std::vector<Block> permute_vector(std::span<const Block> in, std::span<const std::uint32_t> perm);
BitVec permute_bits(const BitVec& in, std::span<const std::uint32_t> perm);

}  // namespace ironman
