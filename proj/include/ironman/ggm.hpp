#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "ironman/prg.hpp"

namespace ironman {

/// Full m-ary tree held level by level; levels[0] is the seed,
/// levels[i] holds m^i nodes.
struct GgmTree {
    int fanout = 2;
    int depth = 1;
    std::vector<std::vector<Block>> levels;

    std::size_t leaf_count() const { return levels.back().size(); }
    std::span<const Block> leaves() const { return levels.back(); }
};

/// Per-level class XOR sums: sums[j] = XOR of nodes with index ≡ j (mod m).
struct LevelSums {
    int level = 0;
    std::vector<Block> sums;
};

inline bool valid_prg_pairing(PrgKind kind, int fanout) {
    if (kind.variant == PrgVariant::DoubleFixedKey) return fanout == 2;
    return fanout == 2 || fanout == 4;
}

GgmTree expand_full_tree(Block seed, int fanout, int depth, PrgKind kind,
                         std::uint32_t tree_id = 0, PrgCallCounter* counter = nullptr);

LevelSums level_class_sums(const GgmTree& tree, int level);

/// Receiver-side tree with exactly one unknown node per level (the path
/// prefix). Levels are filled in by alternating expansion of the known
/// nodes and recovery from received class sums.
class PuncturedTree {
public:
    PuncturedTree(int fanout, int depth, std::span<const int> path_digits);

    int fanout() const { return fanout_; }
    int depth() const { return depth_; }
    const std::vector<int>& path() const { return path_; }
    /// Punctured leaf index (base-m value of the path digits).
    std::size_t punctured_index() const;
    /// Index of the unknown node at `level`.
    std::size_t unknown_index(int level) const;
    int levels_done() const { return levels_done_; }

    /// Nodes of a fully processed level; the entry at unknown_index(level) is
    /// meaningless filler.
    std::span<const Block> level_nodes(int level) const { return levels_[level]; }

    /// Expands known nodes of level-1 into level and recovers the unknown
    /// parent's children from the m-1 labeled class sums (every class except
    /// the level's path digit).
    void reconstruct_level(int level, std::span<const std::pair<int, Block>> labeled_sums,
                           PrgKind kind, std::uint32_t tree_id = 0,
                           PrgCallCounter* counter = nullptr);

    /// Leaf values with the punctured entry as filler; valid once all levels
    /// are reconstructed.
    std::span<const Block> leaves() const;

private:
    int fanout_;
    int depth_;
    std::vector<int> path_;
    std::vector<std::vector<Block>> levels_;
    int levels_done_ = 0;  // number of reconstructed levels past the root
};

/// psi is the sender's node-recovery message Δ ⊕ (XOR of all leaves); returns
/// psi ⊕ (XOR of known leaves) = leaf_α ⊕ Δ.
Block recover_punctured_leaf(const PuncturedTree& partial, Block psi);

enum class PrgFamily : std::uint8_t { FixedKey, Stream };

/// Cipher operations to expand one tree with ℓ = m^depth leaves:
/// FixedKey m-ary: m(ℓ-1)/(m-1); Stream m-ary: (ℓ-1)/(m-1).
std::uint64_t prg_call_count(PrgFamily family, int fanout, std::uint64_t leaf_count);

/// Four-key fixed-cipher 4-ary expansion, the m-ary counting baseline: each
/// node spends four fixed-key permutations (Davies-Meyer) on its children.
/// Measurement-only; the interactive protocol runs DoubleFixedKey or the
/// stream kind.
GgmTree expand_four_key_tree(Block seed, int depth, PrgCallCounter* counter = nullptr);

struct TreeShape {
    int fanout = 2;
    int depth = 1;
};

struct ExpansionStep {
    std::uint32_t tree;
    std::uint16_t level;  // level of the node being expanded
    std::uint32_t node;
};

struct ExpansionSchedule {
    std::vector<ExpansionStep> steps;
    std::uint64_t issued = 0;
    std::uint64_t stalls = 0;
    double utilization = 1.0;
};

/// Greedy pipelined schedule over the given trees' expansion steps. A step's
/// children become issuable pipeline_depth slots after it issues. The emitted
/// order is a dependency-valid interleaving of one batch; the reported
/// utilization models a continuously refilled pipeline (the batch repeating),
/// so it equals the steady-state issue rate rather than a cold-start one.
ExpansionSchedule schedule_expansion(std::span<const TreeShape> trees, int pipeline_depth);

/// Utilization only, without materializing steps; exact same model.
double schedule_utilization(std::span<const TreeShape> trees, int pipeline_depth);

/// Level-major expansion of a tree cohort: all trees advance one level at a
/// time, bounding peak memory to the cohort's node arrays.
std::vector<GgmTree> expand_cohort(std::span<const Block> seeds, int fanout, int depth,
                                   PrgKind kind, std::uint32_t first_tree_id,
                                   PrgCallCounter* counter = nullptr);

}  // namespace ironman
