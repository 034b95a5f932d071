#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ironman/block.hpp"
#include "ironman/prg.hpp"

namespace ironman {

struct pool_exhausted_error : std::runtime_error {
    pool_exhausted_error() : std::runtime_error("COT pool exhausted; replenishment required") {}
};

/// The sender's global correlation offset. Fixed per session, never zero.
struct Delta {
    Block value;

    explicit Delta(Block v) : value(v) {
        if (v.is_zero()) throw std::invalid_argument("Delta must be nonzero");
    }
};

/// Sender side of the base correlations: r_0 values, with r_1 = r_0 ⊕ Δ implied.
class SenderCotPool {
public:
    SenderCotPool(Delta delta, std::vector<Block> blocks)
        : delta_(delta), blocks_(std::move(blocks)) {}

    const Delta& delta() const { return delta_; }
    std::size_t size() const { return blocks_.size(); }
    std::size_t consumed() const { return cursor_; }
    std::size_t remaining() const { return blocks_.size() - cursor_; }
    const std::vector<Block>& blocks() const { return blocks_; }

    /// Consumes one correlation; returns r_0.
    Block next() {
        if (cursor_ >= blocks_.size()) throw pool_exhausted_error{};
        return blocks_[cursor_++];
    }

private:
    Delta delta_;
    std::vector<Block> blocks_;
    std::size_t cursor_ = 0;
};

/// Receiver side: choice bits b and the matching r_b values.
class ReceiverCotPool {
public:
    ReceiverCotPool(BitVec bits, std::vector<Block> blocks)
        : bits_(std::move(bits)), blocks_(std::move(blocks)) {
        if (bits_.size() != blocks_.size())
            throw std::invalid_argument("ReceiverCotPool: bits/blocks length mismatch");
    }

    std::size_t size() const { return blocks_.size(); }
    std::size_t consumed() const { return cursor_; }
    std::size_t remaining() const { return blocks_.size() - cursor_; }
    const BitVec& bits() const { return bits_; }
    const std::vector<Block>& blocks() const { return blocks_; }

    struct Entry {
        bool b;
        Block rb;
    };
    Entry next() {
        if (cursor_ >= blocks_.size()) throw pool_exhausted_error{};
        Entry e{bits_.get(cursor_), blocks_[cursor_]};
        ++cursor_;
        return e;
    }

private:
    BitVec bits_;
    std::vector<Block> blocks_;
    std::size_t cursor_ = 0;
};

struct DealerOutput {
    SenderCotPool sender;
    ReceiverCotPool receiver;
};

/// Local trusted dealer (test/setup mode): deterministically derives `count`
/// correlations from `seed` satisfying r_b = r_0 ⊕ b·Δ at every index.
DealerOutput dealer_generate(std::size_t count, Delta delta, Block seed);

struct OtCiphertexts {
    Block c0, c1;
};

/// Derandomized chosen-message OT, sender side: consumes one COT and masks
/// m_j with crhf(r_{j⊕d}, tweak), d being the receiver's correction bit.
OtCiphertexts ot_send(SenderCotPool& pool, Block m0, Block m1, int d, std::uint64_t tweak);

/// Receiver side: consumes one COT, emits the correction bit d = b ⊕ c and a
/// decoder for the sender's ciphertext pair.
struct OtReceiver {
    int d;
    Block decode(const OtCiphertexts& ct) const {
        return (choice == 0 ? ct.c0 : ct.c1) ^ crhf(rb, tweak);
    }
    int choice;
    Block rb;
    std::uint64_t tweak;
};
OtReceiver ot_receive(ReceiverCotPool& pool, int choice, std::uint64_t tweak);

/// Extension output, sender view: w[i] plays the r_0 role of a fresh COT.
struct SenderBatch {
    Delta delta;
    std::vector<Block> w;
    std::size_t cursor = 0;  // chosen-OT consumption index
};

/// Extension output, receiver view: w[i] = y[i] ⊕ x[i]·Δ.
struct ReceiverBatch {
    BitVec x;
    std::vector<Block> y;
    std::size_t cursor = 0;
};

/// Splits an extension batch: the first `count` correlations seed the next
/// iteration's base pool, the remainder is emitted to the consumer.
std::pair<SenderCotPool, SenderBatch> pool_reserve(SenderBatch batch, std::size_t count);
std::pair<ReceiverCotPool, ReceiverBatch> pool_reserve(ReceiverBatch batch, std::size_t count);

}  // namespace ironman
