#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ironman/base_cot.hpp"

using namespace ironman;

TEST_CASE("zero delta is rejected at session setup") {
    CHECK_THROWS_AS(Delta{Block{}}, std::invalid_argument);
}

TEST_CASE("dealer output satisfies the cross invariant") {
    Delta delta(Block{0xDEAD, 0xBEEF});

    auto tiny = dealer_generate(8, delta, Block{1, 2});
    bool saw_zero = false, saw_one = false;
    for (std::size_t i = 0; i < 8; ++i) {
        bool b = tiny.receiver.bits().get(i);
        Block expect = b ? tiny.sender.blocks()[i] ^ delta.value : tiny.sender.blocks()[i];
        CHECK(tiny.receiver.blocks()[i] == expect);
        (b ? saw_one : saw_zero) = true;
    }
    CHECK(saw_zero);
    CHECK(saw_one);

    auto big = dealer_generate(10000, delta, Block{3, 4});
    for (std::size_t i = 0; i < 10000; ++i) {
        Block expect = big.receiver.bits().get(i) ? big.sender.blocks()[i] ^ delta.value
                                                  : big.sender.blocks()[i];
        REQUIRE(big.receiver.blocks()[i] == expect);
    }

    // deterministic from the seed
    auto again = dealer_generate(10000, delta, Block{3, 4});
    CHECK(again.sender.blocks() == big.sender.blocks());
    CHECK(again.receiver.blocks() == big.receiver.blocks());

    CHECK_THROWS_AS(dealer_generate(0, delta, Block{1, 1}), std::invalid_argument);
}

TEST_CASE("chosen OT recovers m_c for every (b, c) combination") {
    std::mt19937_64 rng(21);
    Delta delta(Block{rng(), rng() | 1});
    for (int b = 0; b < 2; ++b) {
        for (int c = 0; c < 2; ++c) {
            // craft a pool whose first entry has receiver bit b
            std::vector<Block> r0{Block{rng(), rng()}};
            BitVec bits(1);
            bits.set(0, b == 1);
            std::vector<Block> rb{b ? r0[0] ^ delta.value : r0[0]};
            SenderCotPool spool(delta, r0);
            ReceiverCotPool rpool(std::move(bits), std::move(rb));

            Block m0{rng(), rng()}, m1{rng(), rng()};
            auto rx = ot_receive(rpool, c, 77);
            CHECK(rx.d == (b ^ c));
            auto ct = ot_send(spool, m0, m1, rx.d, 77);
            Block got = rx.decode(ct);
            CHECK(got == (c == 0 ? m0 : m1));
            // the transcript never leaks the other message in the clear
            CHECK(ct.c0 != m0);
            CHECK(ct.c1 != m1);
        }
    }
}

TEST_CASE("pool consumption is conserved and exhaustion errors") {
    Delta delta(Block{5, 0});
    auto out = dealer_generate(4, delta, Block{9, 9});
    auto& pool = out.sender;
    for (int i = 0; i < 4; ++i) {
        CHECK(pool.consumed() + pool.remaining() == pool.size());
        pool.next();
    }
    CHECK(pool.remaining() == 0);
    CHECK_THROWS_AS(pool.next(), pool_exhausted_error);

    auto& rpool = out.receiver;
    for (int i = 0; i < 4; ++i) rpool.next();
    CHECK_THROWS_AS(rpool.next(), pool_exhausted_error);
}

TEST_CASE("pool_reserve splits the batch without overlap") {
    std::mt19937_64 rng(22);
    Delta delta(Block{rng(), rng() | 1});
    const std::size_t n = 64;
    SenderBatch sb{delta, {}};
    ReceiverBatch rb;
    rb.x = BitVec(n);
    for (std::size_t i = 0; i < n; ++i) {
        Block w{rng(), rng()};
        bool bit = rng() & 1;
        sb.w.push_back(w);
        rb.x.set(i, bit);
        rb.y.push_back(bit ? w ^ delta.value : w);
    }

    SUBCASE("full reservation leaves nothing emitted") {
        auto [pool, rest] = pool_reserve(std::move(sb), n);
        CHECK(pool.size() == n);
        CHECK(rest.w.empty());
    }
    SUBCASE("zero reservation emits everything") {
        auto [pool, rest] = pool_reserve(std::move(sb), 0);
        CHECK(pool.size() == 0);
        CHECK(rest.w.size() == n);
    }
    SUBCASE("prefix becomes the pool, remainder stays correlated") {
        auto [spool, srest] = pool_reserve(std::move(sb), 16);
        auto [rpool, rrest] = pool_reserve(std::move(rb), 16);
        REQUIRE(spool.size() == 16);
        REQUIRE(srest.w.size() == n - 16);
        for (std::size_t i = 0; i < 16; ++i) {
            Block expect = rpool.bits().get(i) ? spool.blocks()[i] ^ delta.value : spool.blocks()[i];
            CHECK(rpool.blocks()[i] == expect);
        }
        for (std::size_t i = 0; i < n - 16; ++i) {
            Block expect = rrest.x.get(i) ? srest.w[i] ^ delta.value : srest.w[i];
            CHECK(rrest.y[i] == expect);
        }
    }
    SUBCASE("over-reservation errors") {
        CHECK_THROWS_AS(pool_reserve(std::move(sb), n + 1), std::invalid_argument);
    }
}

TEST_CASE("p20 reservation arithmetic") {
    // k + t*log2(ell) = 168000 + 480*12
    const std::size_t k = 168000, t = 480;
    std::size_t log2_ell = 0;
    for (std::size_t l = 1; l < 4096; l <<= 1) ++log2_ell;
    CHECK(k + t * log2_ell == 173760);
}
