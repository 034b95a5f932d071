#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <random>

#include "ironman/ggm.hpp"

using namespace ironman;

namespace {

Block random_block(std::mt19937_64& rng) { return Block{rng(), rng()}; }

// feeds the sender's non-withheld class sums level by level
PuncturedTree reconstruct_from(const GgmTree& tree, std::size_t alpha, PrgKind kind,
                               std::uint32_t tree_id = 0) {
    std::vector<int> digits(tree.depth);
    std::size_t a = alpha;
    for (int i = tree.depth - 1; i >= 0; --i) {
        digits[i] = static_cast<int>(a % tree.fanout);
        a /= tree.fanout;
    }
    PuncturedTree pt(tree.fanout, tree.depth, digits);
    for (int level = 1; level <= tree.depth; ++level) {
        auto sums = level_class_sums(tree, level);
        std::vector<std::pair<int, Block>> labeled;
        for (int j = 0; j < tree.fanout; ++j)
            if (j != digits[level - 1]) labeled.emplace_back(j, sums.sums[j]);
        pt.reconstruct_level(level, labeled, kind, tree_id);
    }
    return pt;
}

}  // namespace

TEST_CASE("expansion call counts match the per-kind formulas") {
    PrgCallCounter c;
    expand_full_tree(Block{1, 0}, 2, 2, PrgKind::fixed_key(), 0, &c);
    CHECK(c.ops == 6);  // 4 leaves, two fixed-key ops per node

    c.ops = 0;
    expand_full_tree(Block{1, 0}, 4, 1, PrgKind::stream(), 0, &c);
    CHECK(c.ops == 1);  // 4 leaves in one stream call

    CHECK(prg_call_count(PrgFamily::FixedKey, 2, 4) == 6);
    CHECK(prg_call_count(PrgFamily::FixedKey, 4, 4) == 4);  // four-key baseline
    CHECK(prg_call_count(PrgFamily::Stream, 2, 4) == 3);
    CHECK(prg_call_count(PrgFamily::Stream, 4, 4) == 1);

    // instrumented counters agree with the formulas across depths
    for (int depth = 1; depth <= 5; ++depth) {
        std::uint64_t ell = 1;
        for (int i = 0; i < depth; ++i) ell *= 2;
        c.ops = 0;
        expand_full_tree(Block{7, 7}, 2, depth, PrgKind::fixed_key(), 0, &c);
        CHECK(c.ops == prg_call_count(PrgFamily::FixedKey, 2, ell));
        c.ops = 0;
        expand_full_tree(Block{7, 7}, 2, depth, PrgKind::stream(), 0, &c);
        CHECK(c.ops == prg_call_count(PrgFamily::Stream, 2, ell));
    }
    for (int depth = 1; depth <= 6; ++depth) {
        std::uint64_t ell = 1;
        for (int i = 0; i < depth; ++i) ell *= 4;
        c.ops = 0;
        expand_full_tree(Block{7, 7}, 4, depth, PrgKind::stream(), 0, &c);
        CHECK(c.ops == prg_call_count(PrgFamily::Stream, 4, ell));
        // the 4-ary stream vs 2-ary fixed-key ratio is exactly 6 at any 4^depth
        CHECK(prg_call_count(PrgFamily::FixedKey, 2, ell) ==
              6 * prg_call_count(PrgFamily::Stream, 4, ell));
    }
}

TEST_CASE("invalid kind/fanout pairing is rejected") {
    CHECK_THROWS_AS(expand_full_tree(Block{}, 4, 2, PrgKind::fixed_key()), config_error);
    CHECK_THROWS_AS(expand_full_tree(Block{}, 3, 2, PrgKind::stream()), config_error);
    CHECK_THROWS_AS(expand_full_tree(Block{}, 2, 0, PrgKind::stream()), config_error);
}

TEST_CASE("class sums on hand-built trees") {
    GgmTree t;
    t.fanout = 2;
    t.depth = 2;
    Block s0{1, 0}, s1{2, 0}, s2{4, 0}, s3{8, 0};
    t.levels = {{Block{9, 9}}, {Block{5, 5}, Block{6, 6}}, {s0, s1, s2, s3}};

    auto sums = level_class_sums(t, 2);
    CHECK(sums.sums[0] == (s0 ^ s2));
    CHECK(sums.sums[1] == (s1 ^ s3));

    // four nodes, fanout 4: one node per class
    GgmTree q;
    q.fanout = 4;
    q.depth = 1;
    q.levels = {{Block{}}, {s0, s1, s2, s3}};
    auto qs = level_class_sums(q, 1);
    for (int j = 0; j < 4; ++j) CHECK(qs.sums[j] == q.levels[1][j]);

    // equal nodes cancel
    GgmTree e;
    e.fanout = 2;
    e.depth = 2;
    e.levels = {{Block{}}, {s0, s0}, {s1, s1, s1, s1}};
    auto es = level_class_sums(e, 2);
    CHECK(es.sums[0].is_zero());
    CHECK(es.sums[1].is_zero());

    CHECK_THROWS_AS(level_class_sums(t, 0), std::invalid_argument);
    CHECK_THROWS_AS(level_class_sums(t, 3), std::invalid_argument);
}

TEST_CASE("class sums XOR to the level XOR") {
    std::mt19937_64 rng(11);
    for (int m : {2, 4}) {
        auto tree = expand_full_tree(random_block(rng), m, 3, PrgKind::stream());
        for (int level = 1; level <= 3; ++level) {
            auto sums = level_class_sums(tree, level);
            CHECK(xor_all(sums.sums) == xor_all(tree.levels[level]));
        }
    }
}

TEST_CASE("binary 4-leaf walkthrough, alpha = 1") {
    // path digits of alpha=1 at depth 2: (0, 1)
    auto tree = expand_full_tree(Block{0xABCD, 0}, 2, 2, PrgKind::stream());
    std::vector<int> digits{0, 1};
    PuncturedTree pt(2, 2, digits);

    // level 1: the receiver holds the class-1 sum, which is s^1_1 itself
    auto l1 = level_class_sums(tree, 1);
    std::pair<int, Block> s1{1, l1.sums[1]};
    pt.reconstruct_level(1, {&s1, 1}, PrgKind::stream());
    CHECK(pt.level_nodes(1)[1] == tree.levels[1][1]);

    // level 2: the class-0 sum recovers s^2_0 given the expanded s^2_2
    auto l2 = level_class_sums(tree, 2);
    std::pair<int, Block> s2{0, l2.sums[0]};
    pt.reconstruct_level(2, {&s2, 1}, PrgKind::stream());
    CHECK(pt.level_nodes(2)[0] == tree.levels[2][0]);
    CHECK(pt.level_nodes(2)[2] == tree.levels[2][2]);
    CHECK(pt.level_nodes(2)[3] == tree.levels[2][3]);
    CHECK(pt.punctured_index() == 1);

    // node recovery: psi folds Delta with all leaves
    Block delta{0x1111, 0x2222};
    Block psi = delta ^ xor_all(tree.leaves());
    CHECK(recover_punctured_leaf(pt, psi) == (tree.levels[2][1] ^ delta));
    // zero-offset degenerate case returns the leaf itself
    CHECK(recover_punctured_leaf(pt, xor_all(tree.leaves())) == tree.levels[2][1]);
}

TEST_CASE("4-ary single level: receiving three classes leaves one unknown") {
    auto tree = expand_full_tree(Block{42, 0}, 4, 1, PrgKind::stream());
    std::vector<int> digits{2};
    PuncturedTree pt(4, 1, digits);
    auto sums = level_class_sums(tree, 1);
    std::vector<std::pair<int, Block>> labeled{{0, sums.sums[0]}, {1, sums.sums[1]}, {3, sums.sums[3]}};
    pt.reconstruct_level(1, labeled, PrgKind::stream());
    CHECK(pt.level_nodes(1)[0] == tree.levels[1][0]);
    CHECK(pt.level_nodes(1)[1] == tree.levels[1][1]);
    CHECK(pt.level_nodes(1)[3] == tree.levels[1][3]);
}

TEST_CASE("reconstruction completeness across depths, fanouts and alphas") {
    std::mt19937_64 rng(12);
    for (int m : {2, 4}) {
        const int max_depth = m == 2 ? 6 : 3;
        for (int depth = 1; depth <= max_depth; ++depth) {
            Block seed = random_block(rng);
            auto tree = expand_full_tree(seed, m, depth, PrgKind::stream(), 5);
            const std::size_t ell = tree.leaf_count();
            for (std::size_t alpha = 0; alpha < ell; ++alpha) {
                auto pt = reconstruct_from(tree, alpha, PrgKind::stream(), 5);
                for (std::size_t i = 0; i < ell; ++i) {
                    if (i == alpha) continue;
                    REQUIRE(pt.leaves()[i] == tree.leaves()[i]);
                }
                Block delta{rng(), rng() | 1};
                Block psi = delta ^ xor_all(tree.leaves());
                REQUIRE(recover_punctured_leaf(pt, psi) == (tree.leaves()[alpha] ^ delta));
            }
        }
    }
}

TEST_CASE("reconstruct_level rejects malformed sums") {
    auto tree = expand_full_tree(Block{1, 1}, 4, 1, PrgKind::stream());
    auto sums = level_class_sums(tree, 1);
    std::vector<int> digits{2};

    PuncturedTree pt(4, 1, digits);
    std::vector<std::pair<int, Block>> too_few{{0, sums.sums[0]}, {1, sums.sums[1]}};
    CHECK_THROWS_AS(pt.reconstruct_level(1, too_few, PrgKind::stream()), std::invalid_argument);

    std::vector<std::pair<int, Block>> dup{{0, sums.sums[0]}, {0, sums.sums[0]}, {1, sums.sums[1]}};
    CHECK_THROWS_AS(pt.reconstruct_level(1, dup, PrgKind::stream()), std::invalid_argument);

    std::vector<std::pair<int, Block>> withheld{{0, sums.sums[0]}, {1, sums.sums[1]}, {2, sums.sums[2]}};
    CHECK_THROWS_AS(pt.reconstruct_level(1, withheld, PrgKind::stream()), std::invalid_argument);

    CHECK_THROWS_AS(recover_punctured_leaf(pt, Block{}), std::invalid_argument);
}

TEST_CASE("expand_cohort matches per-tree expansion") {
    std::mt19937_64 rng(13);
    std::vector<Block> seeds{random_block(rng), random_block(rng), random_block(rng)};
    auto cohort = expand_cohort(seeds, 4, 2, PrgKind::stream(), 100);
    for (std::size_t t = 0; t < seeds.size(); ++t) {
        auto solo = expand_full_tree(seeds[t], 4, 2, PrgKind::stream(),
                                     100 + static_cast<std::uint32_t>(t));
        CHECK(cohort[t].levels == solo.levels);
    }
}

TEST_CASE("schedule: four two-level 4-ary trees keep an 8-deep pipeline full") {
    std::vector<TreeShape> trees(4, TreeShape{4, 2});
    auto sched = schedule_expansion(trees, 8);
    CHECK(sched.utilization == doctest::Approx(1.0));
    CHECK(sched.stalls == 0);
    CHECK(sched.steps.size() == 4 * 5);  // root + 4 level-1 nodes per tree
}

TEST_CASE("schedule: a single depth-1 tree is one step at full utilization") {
    std::vector<TreeShape> trees{TreeShape{4, 1}};
    auto sched = schedule_expansion(trees, 8);
    CHECK(sched.steps.size() == 1);
    CHECK(sched.utilization == doctest::Approx(1.0));
}

TEST_CASE("schedule: one two-level binary tree alone stalls the pipeline") {
    std::vector<TreeShape> trees{TreeShape{2, 2}};
    auto sched = schedule_expansion(trees, 8);
    CHECK(sched.utilization < 1.0);
    // hand-derived: per batch copy, 1 root + 2 children; the children of both
    // copies wait for slot 8, so 6 issues share 12 slots
    CHECK(sched.utilization == doctest::Approx(0.5));
}

TEST_CASE("schedule order is dependency-valid") {
    std::mt19937_64 rng(14);
    for (int iter = 0; iter < 20; ++iter) {
        std::vector<TreeShape> trees;
        const int count = 1 + static_cast<int>(rng() % 5);
        for (int i = 0; i < count; ++i)
            trees.push_back(TreeShape{rng() % 2 ? 2 : 4, 1 + static_cast<int>(rng() % 3)});
        auto sched = schedule_expansion(trees, 1 + static_cast<int>(rng() % 12));

        std::map<std::tuple<std::uint32_t, std::uint16_t, std::uint32_t>, std::size_t> pos;
        for (std::size_t i = 0; i < sched.steps.size(); ++i)
            pos[{sched.steps[i].tree, sched.steps[i].level, sched.steps[i].node}] = i;
        for (auto& st : sched.steps) {
            if (st.level == 0) continue;
            auto parent = pos.find({st.tree, static_cast<std::uint16_t>(st.level - 1),
                                    st.node / static_cast<std::uint32_t>(trees[st.tree].fanout)});
            REQUIRE(parent != pos.end());
            CHECK(parent->second < pos[{st.tree, st.level, st.node}]);
        }
    }
}

TEST_CASE("run-compressed utilization equals the per-node reference") {
    // homogeneous batches route through the run-based fast path; the
    // schedule_expansion value comes from the per-node simulation
    std::mt19937_64 rng(15);
    for (int iter = 0; iter < 12; ++iter) {
        const int m = rng() % 2 ? 2 : 4;
        const int depth = 1 + static_cast<int>(rng() % 3);
        const int count = 1 + static_cast<int>(rng() % 6);
        const int pipe = 1 + static_cast<int>(rng() % 10);
        std::vector<TreeShape> trees(count, TreeShape{m, depth});
        CHECK(schedule_utilization(trees, pipe) ==
              doctest::Approx(schedule_expansion(trees, pipe).utilization));
    }
}
