#pragma once

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ironman {

struct transport_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct protocol_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class MsgType : std::uint8_t {
    LevelOtCorr = 1,  ///< receiver -> sender correction bits
    LevelOtCt = 2,    ///< sender -> receiver ciphertext blocks
    Psi = 3,          ///< sender -> receiver node-recovery block
    Control = 4,      ///< handshake / session control
};

constexpr std::size_t kMaxFramePayload = std::size_t{64} << 20;
constexpr std::size_t kFrameHeaderBytes = 7;  // length u32 | type u8 | session u16

struct Frame {
    MsgType type = MsgType::Control;
    std::uint16_t session = 0;
    std::vector<std::uint8_t> payload;
};

/// Ordered reliable byte stream; exactly one concurrent reader and one
/// concurrent writer are coordinated by the Endpoint above it.
class ByteChannel {
public:
    virtual ~ByteChannel() = default;
    virtual void write_all(std::span<const std::uint8_t> data) = 0;
    virtual void read_exact(std::span<std::uint8_t> out) = 0;
    virtual void close() = 0;
};

/// Framed endpoint multiplexing independent sessions over one connection.
/// Any thread may send (writes are serialized); any thread may recv its own
/// session (one thread at a time drains the stream and routes frames).
class Endpoint {
public:
    explicit Endpoint(std::unique_ptr<ByteChannel> chan);
    ~Endpoint();

    void send(std::uint16_t session, MsgType type, std::span<const std::uint8_t> payload);
    Frame recv(std::uint16_t session);

    std::uint64_t bytes_sent(std::uint16_t session) const;
    std::uint64_t bytes_sent_total() const;

    /// Test hook: observes every frame after send / after receive.
    using FrameTap = std::function<void(const Frame&, bool outgoing)>;
    void set_frame_tap(FrameTap tap);

    void close();

    static std::pair<std::unique_ptr<Endpoint>, std::unique_ptr<Endpoint>> loopback_pair();
    static std::unique_ptr<Endpoint> tcp_connect(const std::string& host, std::uint16_t port,
                                                 int timeout_ms = 5000);

private:
    Frame read_frame();

    std::unique_ptr<ByteChannel> chan_;
    std::mutex write_mu_;
    mutable std::mutex mu_;
    std::condition_variable cv_;
    bool reader_active_ = false;
    std::exception_ptr read_error_;
    std::map<std::uint16_t, std::deque<Frame>> inboxes_;
    std::map<std::uint16_t, std::uint64_t> bytes_sent_;
    FrameTap tap_;
};

/// Listening TCP socket; binds immediately (port 0 picks an ephemeral port).
class TcpListener {
public:
    explicit TcpListener(std::uint16_t port, const std::string& bind_addr = "127.0.0.1");
    ~TcpListener();
    std::uint16_t port() const { return port_; }
    std::unique_ptr<Endpoint> accept(int timeout_ms = 30000);

private:
    int fd_ = -1;
    std::uint16_t port_ = 0;
};

/// Convenience around a session id on an endpoint.
class Session {
public:
    Session(Endpoint& ep, std::uint16_t id) : ep_(&ep), id_(id) {}

    void send(MsgType type, std::span<const std::uint8_t> payload) { ep_->send(id_, type, payload); }
    Frame recv() { return ep_->recv(id_); }
    /// recv that enforces the expected frame type.
    Frame recv_expect(MsgType type) {
        Frame f = ep_->recv(id_);
        if (f.type != type) throw protocol_error("unexpected frame type");
        return f;
    }
    std::uint64_t bytes_sent() const { return ep_->bytes_sent(id_); }
    std::uint16_t id() const { return id_; }
    Endpoint& endpoint() { return *ep_; }

private:
    Endpoint* ep_;
    std::uint16_t id_;
};

}  // namespace ironman
