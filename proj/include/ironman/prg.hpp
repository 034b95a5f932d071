#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "ironman/block.hpp"

namespace ironman {

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class PrgVariant : std::uint8_t {
    DoubleFixedKey,     ///< two fixed-key cipher permutations in Davies-Meyer mode, 2 blocks/expand
    MultiOutputStream,  ///< stream-cipher core (512-bit state), 4 blocks per call
};

struct PrgKind {
    PrgVariant variant = PrgVariant::MultiOutputStream;
    int rounds = 8;  // stream variant only

    static constexpr PrgKind stream(int rounds = 8) {
        return PrgKind{PrgVariant::MultiOutputStream, rounds};
    }
    static constexpr PrgKind fixed_key() { return PrgKind{PrgVariant::DoubleFixedKey, 0}; }

    friend bool operator==(PrgKind, PrgKind) = default;
};

/// Counts primitive cipher operations: one stream-core call per
/// MultiOutputStream expansion, one per fixed-key permutation.
/// Owned by the caller (per session), never by this module.
struct PrgCallCounter {
    std::uint64_t ops = 0;
};

/// Expands `seed` into 2 (DoubleFixedKey) or 4 (MultiOutputStream) blocks.
/// `tweak` domain-separates stream-variant calls (loaded into the counter
/// words); the fixed-key variant follows the plain two-permutation
/// construction and does not consume the tweak.
std::size_t prg_expand(Block seed, PrgKind kind, std::uint64_t tweak, std::span<Block> out,
                       PrgCallCounter* counter = nullptr);

std::vector<Block> prg_expand(Block seed, PrgKind kind, std::uint64_t tweak,
                              PrgCallCounter* counter = nullptr);

/// Correlation-robust hash: one stream-core call keyed by x, truncated to the
/// first output block.
Block crhf(Block x, std::uint64_t tweak);

/// Fixed-key permutation family backing the DoubleFixedKey PRG and the
/// four-key expansion baseline. key_index in [0,4); keys are public constants.
Block fixed_key_perm(int key_index, Block x);

/// Incremental counter-mode keystream over the stream core. Prefix-consistent:
/// the first n bytes are independent of how many bytes are drawn in total.
class PrgStream {
public:
    explicit PrgStream(Block seed, int rounds = 8);

    void fill(std::span<std::uint8_t> out);
    std::uint8_t next_u8();
    std::uint32_t next_u32() {
        if (pos_ + 4 > 64) return next_u32_slow();
        std::uint32_t v = static_cast<std::uint32_t>(buf_[pos_]) |
                          (static_cast<std::uint32_t>(buf_[pos_ + 1]) << 8) |
                          (static_cast<std::uint32_t>(buf_[pos_ + 2]) << 16) |
                          (static_cast<std::uint32_t>(buf_[pos_ + 3]) << 24);
        pos_ += 4;
        return v;
    }
    std::uint64_t next_u64();
    Block next_block();
    /// Uniform draw in [0, bound) by rejection sampling over u32.
    std::uint32_t next_u32_below(std::uint32_t bound);

private:
    void refill();
    std::uint32_t next_u32_slow();

    Block seed_;
    int rounds_;
    std::uint64_t block_counter_ = 0;
    std::uint8_t buf_[64];
    std::size_t pos_ = 64;
};

/// Repeated uniform draws below a fixed bound with the rejection threshold
/// precomputed once.
class BoundedDraw {
public:
    explicit BoundedDraw(std::uint32_t bound) : bound_(bound), limit_(limit_for(bound)) {}
    std::uint32_t next(PrgStream& stream) const {
        for (;;) {
            std::uint32_t v = stream.next_u32();
            if (v <= limit_) return v % bound_;
        }
    }

private:
    static std::uint32_t limit_for(std::uint32_t bound) {
        if (bound == 0) throw config_error("BoundedDraw: zero bound");
        return UINT32_MAX - (UINT32_MAX % bound + 1) % bound;
    }

    std::uint32_t bound_;
    std::uint32_t limit_;
};

std::vector<std::uint8_t> prg_stream(Block seed, std::size_t byte_count);

namespace tweaks {
// 64-bit tweak layout: (tree_id:32 | tag:8 | index:24).
constexpr std::uint64_t make(std::uint32_t tree, std::uint8_t tag, std::uint32_t index) {
    return (static_cast<std::uint64_t>(tree) << 32) | (static_cast<std::uint64_t>(tag) << 24) |
           (index & 0xFFFFFF);
}
// tag bytes
constexpr std::uint8_t kExpand = 0x00;       // | level, index = node
constexpr std::uint8_t kMiniExpand = 0x40;   // | main level
constexpr std::uint8_t kMiniSeed = 0x50;     // | main level
constexpr std::uint8_t kLevelOt = 0x60;      // | level, index = ot slot
constexpr std::uint8_t kClassSumCt = 0x70;   // | level, index = class
constexpr std::uint8_t kDealer = 0xD0;
constexpr std::uint8_t kHandshake = 0xC0;
// engine-scope tweaks use tree = 0xFFFFFFxx namespaces
constexpr std::uint64_t open_ot(std::uint64_t index) {
    return 0x4F54'0000'0000'0000ULL | index;
}
}  // namespace tweaks

}  // namespace ironman
