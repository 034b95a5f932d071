#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ironman/base_cot.hpp"
#include "ironman/ggm.hpp"
#include "ironman/transport.hpp"

namespace ironman {

struct SpcotSenderOutput {
    std::vector<Block> w;  ///< the ℓ leaf values
};

struct SpcotReceiverOutput {
    std::size_t alpha = 0;
    std::vector<Block> v;  ///< v[i] = w[i] off alpha, v[alpha] = w[alpha] ⊕ Δ
};

struct SpcotConfig {
    std::size_t ell = 0;
    int fanout = 2;
    PrgKind kind = PrgKind::stream();
    std::uint32_t tree_id = 0;

    int depth() const;  ///< log_fanout(ell); throws unless ell is a power of fanout
};

/// Runs the sender side of one single-point COT over `session`: expands the
/// tree from `tree_seed`, serves every level's class sums through the
/// (m-1)-out-of-m OT, then sends psi = Δ ⊕ (XOR of all leaves). Consumes
/// exactly log2(ell) base COTs. `expand_counter` sees only main-tree
/// expansions; mini-tree work lands in `aux_counter`.
SpcotSenderOutput spcot_send(Session& session, SenderCotPool& pool, const Delta& delta,
                             const SpcotConfig& cfg, Block tree_seed,
                             PrgCallCounter* expand_counter = nullptr,
                             PrgCallCounter* aux_counter = nullptr);

/// Sender side when the tree is already expanded (also the hook the
/// transcript tests use to replay a doctored tree).
SpcotSenderOutput spcot_send_from_tree(Session& session, SenderCotPool& pool, const Delta& delta,
                                       const SpcotConfig& cfg, const GgmTree& tree,
                                       Block tree_seed, PrgCallCounter* aux_counter = nullptr);

SpcotReceiverOutput spcot_receive(Session& session, ReceiverCotPool& pool, const SpcotConfig& cfg,
                                  std::size_t alpha, PrgCallCounter* expand_counter = nullptr,
                                  PrgCallCounter* aux_counter = nullptr);

/// (m-1)-out-of-m oblivious delivery of one level's class sums. For m=2 this
/// is a single derandomized OT on (K_0, K_1); for m=4 a fresh 4-leaf mini GGM
/// tree masks the four sums and the receiver reconstructs all but the
/// withheld class. Consumes log2(m) base COTs.
void oblivious_class_sums_send(Session& session, SenderCotPool& pool, const LevelSums& sums,
                               const SpcotConfig& cfg, int level, Block mini_seed,
                               PrgCallCounter* aux_counter = nullptr);

std::vector<std::pair<int, Block>> oblivious_class_sums_receive(Session& session,
                                                                ReceiverCotPool& pool,
                                                                const SpcotConfig& cfg, int level,
                                                                int withheld_class,
                                                                PrgCallCounter* aux_counter = nullptr);

/// Seed for the level's mini tree, derived from the tree seed in a dedicated
/// tweak space so transcripts are reproducible.
Block derive_mini_seed(Block tree_seed, std::uint32_t tree_id, int level);

/// Digits of alpha in base m, most significant first.
std::vector<int> alpha_digits(std::size_t alpha, int fanout, int depth);

}  // namespace ironman
