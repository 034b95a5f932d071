#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <random>
#include <thread>

#include "ironman/transport.hpp"

using namespace ironman;

namespace {

std::vector<std::uint8_t> random_payload(std::mt19937_64& rng, std::size_t max_len) {
    std::vector<std::uint8_t> p(rng() % (max_len + 1));
    for (auto& b : p) b = static_cast<std::uint8_t>(rng());
    return p;
}

// byte channel replaying a fixed byte sequence, for malformed-input tests
class ScriptedChannel final : public ByteChannel {
public:
    explicit ScriptedChannel(std::vector<std::uint8_t> bytes) : bytes_(std::move(bytes)) {}
    void write_all(std::span<const std::uint8_t>) override {}
    void read_exact(std::span<std::uint8_t> out) override {
        if (pos_ + out.size() > bytes_.size()) throw transport_error("scripted: exhausted");
        std::copy_n(bytes_.begin() + static_cast<long>(pos_), out.size(), out.begin());
        pos_ += out.size();
    }
    void close() override {}

private:
    std::vector<std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

}  // namespace

TEST_CASE("empty payload round-trips") {
    auto [a, b] = Endpoint::loopback_pair();
    a->send(1, MsgType::Control, {});
    Frame f = b->recv(1);
    CHECK(f.type == MsgType::Control);
    CHECK(f.session == 1);
    CHECK(f.payload.empty());
}

TEST_CASE("1000 random frames arrive byte-identical and in order") {
    auto [a, b] = Endpoint::loopback_pair();
    std::mt19937_64 rng(61);
    std::vector<Frame> sent;
    for (int i = 0; i < 1000; ++i) {
        Frame f;
        f.type = static_cast<MsgType>(1 + rng() % 4);
        f.session = 7;
        f.payload = random_payload(rng, 200);
        a->send(f.session, f.type, f.payload);
        sent.push_back(std::move(f));
    }
    for (int i = 0; i < 1000; ++i) {
        Frame got = b->recv(7);
        REQUIRE(got.type == sent[i].type);
        REQUIRE(got.payload == sent[i].payload);
    }
}

TEST_CASE("two sessions interleave without crosstalk") {
    auto [a, b] = Endpoint::loopback_pair();
    std::mt19937_64 rng(62);
    // deterministic interleaving of two sessions on the same wire
    std::vector<std::vector<std::uint8_t>> s1, s2;
    for (int i = 0; i < 100; ++i) {
        auto p1 = random_payload(rng, 64);
        auto p2 = random_payload(rng, 64);
        a->send(1, MsgType::Psi, p1);
        a->send(2, MsgType::Control, p2);
        s1.push_back(std::move(p1));
        s2.push_back(std::move(p2));
    }
    // session readers on separate threads each observe their own order
    std::thread t2([&] {
        for (int i = 0; i < 100; ++i) {
            Frame f = b->recv(2);
            REQUIRE(f.payload == s2[i]);
        }
    });
    for (int i = 0; i < 100; ++i) {
        Frame f = b->recv(1);
        REQUIRE(f.payload == s1[i]);
    }
    t2.join();
}

TEST_CASE("byte accounting matches frame sizes plus headers") {
    auto [a, b] = Endpoint::loopback_pair();
    std::uint64_t expect1 = 0, expect2 = 0;
    std::mt19937_64 rng(63);
    for (int i = 0; i < 50; ++i) {
        auto p = random_payload(rng, 128);
        a->send(1, MsgType::Psi, p);
        expect1 += p.size() + kFrameHeaderBytes;
        auto q = random_payload(rng, 128);
        a->send(2, MsgType::Psi, q);
        expect2 += q.size() + kFrameHeaderBytes;
    }
    CHECK(a->bytes_sent(1) == expect1);
    CHECK(a->bytes_sent(2) == expect2);
    CHECK(a->bytes_sent_total() == expect1 + expect2);
}

TEST_CASE("oversize frames are rejected") {
    auto [a, b] = Endpoint::loopback_pair();
    std::vector<std::uint8_t> big(kMaxFramePayload + 1);
    CHECK_THROWS_AS(a->send(1, MsgType::Psi, big), transport_error);
}

TEST_CASE("malformed headers raise transport errors") {
    SUBCASE("unknown msg_type") {
        std::vector<std::uint8_t> bytes{0, 0, 0, 0, 9, 1, 0};  // len 0, type 9
        Endpoint ep(std::make_unique<ScriptedChannel>(bytes));
        CHECK_THROWS_AS(ep.recv(1), transport_error);
    }
    SUBCASE("length over cap") {
        std::vector<std::uint8_t> bytes{0xFF, 0xFF, 0xFF, 0xFF, 1, 1, 0};
        Endpoint ep(std::make_unique<ScriptedChannel>(bytes));
        CHECK_THROWS_AS(ep.recv(1), transport_error);
    }
}

TEST_CASE("peer close surfaces as a transport error") {
    auto [a, b] = Endpoint::loopback_pair();
    a->close();
    CHECK_THROWS_AS(b->recv(1), transport_error);
}

TEST_CASE("tcp localhost pair carries frames") {
    TcpListener listener(0);
    std::unique_ptr<Endpoint> server;
    std::thread accepter([&] { server = listener.accept(5000); });
    auto client = Endpoint::tcp_connect("127.0.0.1", listener.port(), 5000);
    accepter.join();
    REQUIRE(server);

    std::mt19937_64 rng(64);
    for (int i = 0; i < 100; ++i) {
        auto p = random_payload(rng, 300);
        client->send(3, MsgType::LevelOtCt, p);
        Frame f = server->recv(3);
        REQUIRE(f.payload == p);
        server->send(3, MsgType::LevelOtCorr, p);
        Frame g = client->recv(3);
        REQUIRE(g.payload == p);
    }
}

TEST_CASE("connecting to a closed port fails fast") {
    // grab an ephemeral port and close it so nothing listens there
    std::uint16_t dead_port;
    {
        TcpListener tmp(0);
        dead_port = tmp.port();
    }
    auto t0 = std::chrono::steady_clock::now();
    CHECK_THROWS_AS(Endpoint::tcp_connect("127.0.0.1", dead_port, 2000), transport_error);
    auto elapsed = std::chrono::steady_clock::now() - t0;
    CHECK(std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count() < 2500);
}
