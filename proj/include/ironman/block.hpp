#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ironman {

/// 128-bit value. The payload of every correlation, tree node and PRG output.
/// XOR is the only algebraic operation; serialization is 16 bytes little-endian.
struct Block {
    std::uint64_t lo = 0;
    std::uint64_t hi = 0;

    constexpr Block() = default;
    constexpr Block(std::uint64_t lo_, std::uint64_t hi_) : lo(lo_), hi(hi_) {}

    friend constexpr Block operator^(Block a, Block b) {
        return Block{a.lo ^ b.lo, a.hi ^ b.hi};
    }
    constexpr Block& operator^=(Block b) {
        lo ^= b.lo;
        hi ^= b.hi;
        return *this;
    }
    friend constexpr bool operator==(Block a, Block b) = default;

    constexpr bool is_zero() const { return lo == 0 && hi == 0; }

    void store_le(std::uint8_t* out) const {
        for (int i = 0; i < 8; ++i) out[i] = static_cast<std::uint8_t>(lo >> (8 * i));
        for (int i = 0; i < 8; ++i) out[8 + i] = static_cast<std::uint8_t>(hi >> (8 * i));
    }
    static Block load_le(const std::uint8_t* in) {
        Block b;
        for (int i = 0; i < 8; ++i) b.lo |= static_cast<std::uint64_t>(in[i]) << (8 * i);
        for (int i = 0; i < 8; ++i) b.hi |= static_cast<std::uint64_t>(in[8 + i]) << (8 * i);
        return b;
    }
};

constexpr Block kZeroBlock{};

inline Block xor_all(std::span<const Block> xs) {
    Block acc;
    for (Block x : xs) acc ^= x;
    return acc;
}

/// Packed bit vector, LSB-first within each 64-bit word.
class BitVec {
public:
    BitVec() = default;
    explicit BitVec(std::size_t n) : words_((n + 63) / 64, 0), size_(n) {}

    std::size_t size() const { return size_; }
    bool empty() const { return size_ == 0; }

    bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }
    void set(std::size_t i, bool v) {
        std::uint64_t mask = std::uint64_t{1} << (i & 63);
        if (v)
            words_[i >> 6] |= mask;
        else
            words_[i >> 6] &= ~mask;
    }
    void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(__builtin_popcountll(w));
        return c;
    }

    friend bool operator==(const BitVec& a, const BitVec& b) {
        return a.size_ == b.size_ && a.words_ == b.words_;
    }

    std::span<const std::uint64_t> words() const { return words_; }
    std::span<std::uint64_t> words() { return words_; }

    /// Packed byte image, LSB-first within each byte, ceil(size/8) bytes.
    std::vector<std::uint8_t> to_bytes() const {
        std::vector<std::uint8_t> out((size_ + 7) / 8, 0);
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = static_cast<std::uint8_t>(words_[i >> 3] >> (8 * (i & 7)));
        return out;
    }
    static BitVec from_bytes(std::span<const std::uint8_t> bytes, std::size_t n) {
        BitVec v(n);
        for (std::size_t i = 0; i < bytes.size() && i / 8 < v.words_.size(); ++i)
            v.words_[i >> 3] |= static_cast<std::uint64_t>(bytes[i]) << (8 * (i & 7));
        // mask tail bits beyond n
        if (n % 64 != 0 && !v.words_.empty())
            v.words_.back() &= (std::uint64_t{1} << (n % 64)) - 1;
        return v;
    }

private:
    std::vector<std::uint64_t> words_;
    std::size_t size_ = 0;
};

}  // namespace ironman
