#include "ironman/ggm.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

namespace ironman {

namespace {

void expand_node(Block parent, int fanout, PrgKind kind, std::uint64_t tweak, Block* children,
                 PrgCallCounter* counter) {
    Block out[4];
    prg_expand(parent, kind, tweak, out, counter);
    for (int c = 0; c < fanout; ++c) children[c] = out[c];
}

}  // namespace

GgmTree expand_full_tree(Block seed, int fanout, int depth, PrgKind kind, std::uint32_t tree_id,
                         PrgCallCounter* counter) {
    if (depth < 1) throw config_error("expand_full_tree: depth must be >= 1");
    if (!valid_prg_pairing(kind, fanout))
        throw config_error("expand_full_tree: invalid (kind, fanout) pairing");

    GgmTree tree;
    tree.fanout = fanout;
    tree.depth = depth;
    tree.levels.resize(depth + 1);
    tree.levels[0] = {seed};
    for (int level = 1; level <= depth; ++level) {
        const auto& parents = tree.levels[level - 1];
        auto& nodes = tree.levels[level];
        nodes.resize(parents.size() * fanout);
        for (std::size_t j = 0; j < parents.size(); ++j) {
            expand_node(parents[j], fanout, kind,
                        tweaks::make(tree_id, static_cast<std::uint8_t>(level),
                                     static_cast<std::uint32_t>(j)),
                        nodes.data() + j * fanout, counter);
        }
    }
    return tree;
}

LevelSums level_class_sums(const GgmTree& tree, int level) {
    if (level < 1 || level > tree.depth) throw std::invalid_argument("level_class_sums: level out of range");
    LevelSums out;
    out.level = level;
    out.sums.assign(tree.fanout, Block{});
    const auto& nodes = tree.levels[level];
    for (std::size_t j = 0; j < nodes.size(); ++j) out.sums[j % tree.fanout] ^= nodes[j];
    return out;
}

PuncturedTree::PuncturedTree(int fanout, int depth, std::span<const int> path_digits)
    : fanout_(fanout), depth_(depth), path_(path_digits.begin(), path_digits.end()) {
    if (depth < 1) throw std::invalid_argument("PuncturedTree: depth must be >= 1");
    if (static_cast<int>(path_.size()) != depth)
        throw std::invalid_argument("PuncturedTree: path length != depth");
    for (int d : path_)
        if (d < 0 || d >= fanout) throw std::invalid_argument("PuncturedTree: path digit out of range");
    levels_.resize(depth + 1);
    levels_[0].assign(1, Block{});  // the root is never known to this side
}

std::size_t PuncturedTree::punctured_index() const {
    std::size_t idx = 0;
    for (int d : path_) idx = idx * fanout_ + static_cast<std::size_t>(d);
    return idx;
}

std::size_t PuncturedTree::unknown_index(int level) const {
    std::size_t idx = 0;
    for (int i = 0; i < level; ++i) idx = idx * fanout_ + static_cast<std::size_t>(path_[i]);
    return idx;
}

void PuncturedTree::reconstruct_level(int level, std::span<const std::pair<int, Block>> labeled_sums,
                                      PrgKind kind, std::uint32_t tree_id,
                                      PrgCallCounter* counter) {
    if (level < 1 || level > depth_) throw std::invalid_argument("reconstruct_level: level out of range");
    if (level != levels_done_ + 1)
        throw std::invalid_argument("reconstruct_level: levels must be processed in order");
    if (labeled_sums.size() != static_cast<std::size_t>(fanout_) - 1)
        throw std::invalid_argument("reconstruct_level: wrong number of class sums");
    const int alpha = path_[level - 1];
    std::vector<bool> seen(fanout_, false);
    for (auto& [cls, sum] : labeled_sums) {
        (void)sum;
        if (cls < 0 || cls >= fanout_) throw std::invalid_argument("reconstruct_level: bad class label");
        if (cls == alpha) throw std::invalid_argument("reconstruct_level: received the withheld class");
        if (seen[cls]) throw std::invalid_argument("reconstruct_level: duplicate class label");
        seen[cls] = true;
    }

    const auto& parents = levels_[level - 1];
    const std::size_t unknown_parent = unknown_index(level - 1);
    auto& nodes = levels_[level];
    nodes.assign(parents.size() * fanout_, Block{});

    // children of known parents
    for (std::size_t j = 0; j < parents.size(); ++j) {
        if (j == unknown_parent) continue;
        expand_node(parents[j], fanout_, kind,
                    tweaks::make(tree_id, static_cast<std::uint8_t>(level),
                                 static_cast<std::uint32_t>(j)),
                    nodes.data() + j * fanout_, counter);
    }

    // received[j] ⊕ (XOR of known class-j nodes) recovers the unknown
    // parent's class-j child
    for (auto& [cls, sum] : labeled_sums) {
        Block known;
        for (std::size_t j = static_cast<std::size_t>(cls); j < nodes.size();
             j += static_cast<std::size_t>(fanout_)) {
            if (j / fanout_ == unknown_parent) continue;
            known ^= nodes[j];
        }
        nodes[unknown_parent * fanout_ + cls] = sum ^ known;
    }
    levels_done_ = level;
}

std::span<const Block> PuncturedTree::leaves() const {
    if (levels_done_ != depth_)
        throw std::logic_error("PuncturedTree::leaves: reconstruction incomplete");
    return levels_[depth_];
}

Block recover_punctured_leaf(const PuncturedTree& partial, Block psi) {
    if (partial.levels_done() != partial.depth())
        throw std::invalid_argument("recover_punctured_leaf: more than one unknown leaf");
    Block acc = psi;
    auto leaves = partial.level_nodes(partial.depth());
    const std::size_t alpha = partial.punctured_index();
    for (std::size_t i = 0; i < leaves.size(); ++i) {
        if (i == alpha) continue;
        acc ^= leaves[i];
    }
    return acc;
}

GgmTree expand_four_key_tree(Block seed, int depth, PrgCallCounter* counter) {
    if (depth < 1) throw config_error("expand_four_key_tree: depth must be >= 1");
    GgmTree tree;
    tree.fanout = 4;
    tree.depth = depth;
    tree.levels.resize(depth + 1);
    tree.levels[0] = {seed};
    for (int level = 1; level <= depth; ++level) {
        const auto& parents = tree.levels[level - 1];
        auto& nodes = tree.levels[level];
        nodes.resize(parents.size() * 4);
        for (std::size_t j = 0; j < parents.size(); ++j) {
            for (int c = 0; c < 4; ++c) nodes[j * 4 + c] = fixed_key_perm(c, parents[j]) ^ parents[j];
            if (counter) counter->ops += 4;
        }
    }
    return tree;
}

std::uint64_t prg_call_count(PrgFamily family, int fanout, std::uint64_t leaf_count) {
    if (fanout < 2) throw config_error("prg_call_count: fanout must be >= 2");
    std::uint64_t l = 1;
    while (l < leaf_count) l *= static_cast<std::uint64_t>(fanout);
    if (l != leaf_count) throw config_error("prg_call_count: leaf count not a power of fanout");
    std::uint64_t internal = (leaf_count - 1) / static_cast<std::uint64_t>(fanout - 1);
    return family == PrgFamily::FixedKey ? internal * static_cast<std::uint64_t>(fanout) : internal;
}

namespace {

// Reference pipelined-issue simulation over explicit steps. `copies` > 1
// re-enqueues the whole batch with fresh roots, which models a continuously
// refilled pipeline.
struct NodeSimResult {
    std::vector<ExpansionStep> first_copy_order;
    std::uint64_t issued = 0;
    std::uint64_t stalls = 0;
};

NodeSimResult simulate_per_node(std::span<const TreeShape> trees, int pipeline_depth, int copies,
                                bool record_steps) {
    struct Step {
        std::uint32_t copy, tree, node;
        std::uint16_t level;
    };
    NodeSimResult res;
    // ready events keyed by slot
    using Ready = std::pair<std::uint64_t, Step>;
    auto cmp = [](const Ready& a, const Ready& b) {
        if (a.first != b.first) return a.first > b.first;
        const Step &x = a.second, &y = b.second;
        if (x.copy != y.copy) return x.copy > y.copy;
        if (x.tree != y.tree) return x.tree > y.tree;
        if (x.level != y.level) return x.level > y.level;
        return x.node > y.node;
    };
    std::priority_queue<Ready, std::vector<Ready>, decltype(cmp)> ready(cmp);

    std::uint64_t remaining = 0;
    for (int c = 0; c < copies; ++c) {
        for (std::uint32_t t = 0; t < trees.size(); ++t) {
            ready.push({0, Step{static_cast<std::uint32_t>(c), t, 0, 0}});
            std::uint64_t nodes = 1, total = 0;
            for (int l = 0; l < trees[t].depth; ++l) {
                total += nodes;
                nodes *= static_cast<std::uint64_t>(trees[t].fanout);
            }
            remaining += total;
        }
    }

    std::uint64_t slot = 0;
    while (remaining > 0) {
        if (!ready.empty() && ready.top().first <= slot) {
            auto [r, st] = ready.top();
            ready.pop();
            --remaining;
            ++res.issued;
            if (record_steps && st.copy == 0)
                res.first_copy_order.push_back({st.tree, st.level, st.node});
            const TreeShape& shape = trees[st.tree];
            if (st.level + 1 < shape.depth) {
                for (int c = 0; c < shape.fanout; ++c) {
                    ready.push({slot + static_cast<std::uint64_t>(pipeline_depth),
                                Step{st.copy, st.tree,
                                     st.node * static_cast<std::uint32_t>(shape.fanout) +
                                         static_cast<std::uint32_t>(c),
                                     static_cast<std::uint16_t>(st.level + 1)}});
                }
            }
        } else {
            ++res.stalls;
        }
        ++slot;
    }
    return res;
}

// Run-compressed version of the same simulation for homogeneous batches:
// contiguously issued parents yield a child run maturing at `fanout` nodes
// per slot, so entire runs issue back to back.
struct Run {
    std::uint64_t start;      // slot the first element becomes ready
    std::uint64_t per_slot;   // elements maturing per slot
    std::uint64_t slots;      // number of maturing slots
    std::uint16_t level;
    std::uint64_t total() const { return per_slot * slots; }
};

std::pair<std::uint64_t, std::uint64_t> simulate_runs(const TreeShape& shape, std::uint64_t n_trees,
                                                      int pipeline_depth, int copies) {
    auto cmp = [](const Run& a, const Run& b) { return a.start > b.start; };
    std::priority_queue<Run, std::vector<Run>, decltype(cmp)> q(cmp);
    q.push(Run{0, n_trees * static_cast<std::uint64_t>(copies), 1, 0});
    std::uint64_t slot = 0, issued = 0, stalls = 0;
    while (!q.empty()) {
        Run r = q.top();
        q.pop();
        if (r.start > slot) {
            stalls += r.start - slot;
            slot = r.start;
        }
        std::uint64_t c = r.total();
        if (r.level + 1 < shape.depth)
            q.push(Run{slot + static_cast<std::uint64_t>(pipeline_depth),
                       static_cast<std::uint64_t>(shape.fanout), c,
                       static_cast<std::uint16_t>(r.level + 1)});
        slot += c;
        issued += c;
    }
    return {issued, stalls};
}

}  // namespace

ExpansionSchedule schedule_expansion(std::span<const TreeShape> trees, int pipeline_depth) {
    if (pipeline_depth < 1) throw std::invalid_argument("schedule_expansion: pipeline_depth must be >= 1");
    ExpansionSchedule sched;
    if (trees.empty()) return sched;
    auto one = simulate_per_node(trees, pipeline_depth, 1, true);
    sched.steps = std::move(one.first_copy_order);
    auto two = simulate_per_node(trees, pipeline_depth, 2, false);
    sched.issued = two.issued;
    sched.stalls = two.stalls;
    sched.utilization =
        static_cast<double>(two.issued) / static_cast<double>(two.issued + two.stalls);
    return sched;
}

double schedule_utilization(std::span<const TreeShape> trees, int pipeline_depth) {
    if (pipeline_depth < 1) throw std::invalid_argument("schedule_utilization: pipeline_depth must be >= 1");
    if (trees.empty()) return 1.0;
    bool homogeneous = std::all_of(trees.begin(), trees.end(), [&](const TreeShape& s) {
        return s.fanout == trees[0].fanout && s.depth == trees[0].depth;
    });
    if (homogeneous) {
        auto [issued, stalls] = simulate_runs(trees[0], trees.size(), pipeline_depth, 2);
        return static_cast<double>(issued) / static_cast<double>(issued + stalls);
    }
    auto res = simulate_per_node(trees, pipeline_depth, 2, false);
    return static_cast<double>(res.issued) / static_cast<double>(res.issued + res.stalls);
}

std::vector<GgmTree> expand_cohort(std::span<const Block> seeds, int fanout, int depth, PrgKind kind,
                                   std::uint32_t first_tree_id, PrgCallCounter* counter) {
    if (depth < 1) throw config_error("expand_cohort: depth must be >= 1");
    if (!valid_prg_pairing(kind, fanout))
        throw config_error("expand_cohort: invalid (kind, fanout) pairing");
    std::vector<GgmTree> trees(seeds.size());
    for (std::size_t t = 0; t < seeds.size(); ++t) {
        trees[t].fanout = fanout;
        trees[t].depth = depth;
        trees[t].levels.resize(depth + 1);
        trees[t].levels[0] = {seeds[t]};
    }
    for (int level = 1; level <= depth; ++level) {
        for (std::size_t t = 0; t < trees.size(); ++t) {
            const auto& parents = trees[t].levels[level - 1];
            auto& nodes = trees[t].levels[level];
            nodes.resize(parents.size() * fanout);
            for (std::size_t j = 0; j < parents.size(); ++j) {
                expand_node(parents[j], fanout, kind,
                            tweaks::make(first_tree_id + static_cast<std::uint32_t>(t),
                                         static_cast<std::uint8_t>(level),
                                         static_cast<std::uint32_t>(j)),
                            nodes.data() + j * fanout, counter);
            }
        }
    }
    return trees;
}

}  // namespace ironman
