#include "ironman/transport.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

namespace ironman {

namespace {

// ---------------------------------------------------------------------------
// in-process byte pipe

struct Pipe {
    std::mutex mu;
    std::condition_variable cv;
    std::deque<std::vector<std::uint8_t>> chunks;
    std::size_t front_off = 0;
    bool closed = false;

    void write(std::span<const std::uint8_t> data) {
        std::lock_guard lk(mu);
        if (closed) throw transport_error("loopback: peer closed");
        chunks.emplace_back(data.begin(), data.end());
        cv.notify_all();
    }
    void read_exact(std::span<std::uint8_t> out) {
        std::size_t done = 0;
        std::unique_lock lk(mu);
        while (done < out.size()) {
            cv.wait(lk, [&] { return !chunks.empty() || closed; });
            if (chunks.empty()) throw transport_error("loopback: peer closed");
            auto& front = chunks.front();
            std::size_t take = std::min(front.size() - front_off, out.size() - done);
            std::memcpy(out.data() + done, front.data() + front_off, take);
            done += take;
            front_off += take;
            if (front_off == front.size()) {
                chunks.pop_front();
                front_off = 0;
            }
        }
    }
    void close() {
        std::lock_guard lk(mu);
        closed = true;
        cv.notify_all();
    }
};

class LoopbackChannel final : public ByteChannel {
public:
    LoopbackChannel(std::shared_ptr<Pipe> rd, std::shared_ptr<Pipe> wr)
        : rd_(std::move(rd)), wr_(std::move(wr)) {}
    ~LoopbackChannel() override { close(); }

    void write_all(std::span<const std::uint8_t> data) override { wr_->write(data); }
    void read_exact(std::span<std::uint8_t> out) override { rd_->read_exact(out); }
    void close() override {
        rd_->close();
        wr_->close();
    }

private:
    std::shared_ptr<Pipe> rd_, wr_;
};

// ---------------------------------------------------------------------------
// TCP

class TcpChannel final : public ByteChannel {
public:
    explicit TcpChannel(int fd) : fd_(fd) {
        int one = 1;
        ::setsockopt(fd_, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
    }
    ~TcpChannel() override { close(); }

    void write_all(std::span<const std::uint8_t> data) override {
        std::size_t done = 0;
        while (done < data.size()) {
            ssize_t n = ::send(fd_, data.data() + done, data.size() - done, MSG_NOSIGNAL);
            if (n <= 0) {
                if (n < 0 && errno == EINTR) continue;
                throw transport_error(std::string("tcp send failed: ") + std::strerror(errno));
            }
            done += static_cast<std::size_t>(n);
        }
    }
    void read_exact(std::span<std::uint8_t> out) override {
        std::size_t done = 0;
        while (done < out.size()) {
            ssize_t n = ::recv(fd_, out.data() + done, out.size() - done, 0);
            if (n == 0) throw transport_error("tcp: peer closed");
            if (n < 0) {
                if (errno == EINTR) continue;
                throw transport_error(std::string("tcp recv failed: ") + std::strerror(errno));
            }
            done += static_cast<std::size_t>(n);
        }
    }
    void close() override {
        if (fd_ >= 0) {
            ::shutdown(fd_, SHUT_RDWR);
            ::close(fd_);
            fd_ = -1;
        }
    }

private:
    int fd_;
};

void store_u32_le(std::uint8_t* p, std::uint32_t v) {
    p[0] = static_cast<std::uint8_t>(v);
    p[1] = static_cast<std::uint8_t>(v >> 8);
    p[2] = static_cast<std::uint8_t>(v >> 16);
    p[3] = static_cast<std::uint8_t>(v >> 24);
}
std::uint32_t load_u32_le(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

}  // namespace

Endpoint::Endpoint(std::unique_ptr<ByteChannel> chan) : chan_(std::move(chan)) {}

Endpoint::~Endpoint() {
    if (chan_) chan_->close();
}

void Endpoint::close() {
    if (chan_) chan_->close();
}

void Endpoint::set_frame_tap(FrameTap tap) {
    std::lock_guard lk(mu_);
    tap_ = std::move(tap);
}

void Endpoint::send(std::uint16_t session, MsgType type, std::span<const std::uint8_t> payload) {
    if (payload.size() > kMaxFramePayload) throw transport_error("frame payload exceeds 64 MiB cap");
    std::vector<std::uint8_t> buf(kFrameHeaderBytes + payload.size());
    store_u32_le(buf.data(), static_cast<std::uint32_t>(payload.size()));
    buf[4] = static_cast<std::uint8_t>(type);
    buf[5] = static_cast<std::uint8_t>(session);
    buf[6] = static_cast<std::uint8_t>(session >> 8);
    std::memcpy(buf.data() + kFrameHeaderBytes, payload.data(), payload.size());
    {
        std::lock_guard lk(write_mu_);
        chan_->write_all(buf);
    }
    {
        std::lock_guard lk(mu_);
        bytes_sent_[session] += buf.size();
        if (tap_) tap_(Frame{type, session, {payload.begin(), payload.end()}}, true);
    }
}

Frame Endpoint::read_frame() {
    std::uint8_t hdr[kFrameHeaderBytes];
    chan_->read_exact(hdr);
    Frame f;
    std::uint32_t len = load_u32_le(hdr);
    if (len > kMaxFramePayload) throw transport_error("malformed header: length exceeds 64 MiB cap");
    std::uint8_t t = hdr[4];
    if (t < 1 || t > 4) throw transport_error("malformed header: unknown msg_type");
    f.type = static_cast<MsgType>(t);
    f.session = static_cast<std::uint16_t>(hdr[5] | (hdr[6] << 8));
    f.payload.resize(len);
    if (len > 0) chan_->read_exact(f.payload);
    return f;
}

Frame Endpoint::recv(std::uint16_t session) {
    std::unique_lock lk(mu_);
    for (;;) {
        auto it = inboxes_.find(session);
        if (it != inboxes_.end() && !it->second.empty()) {
            Frame f = std::move(it->second.front());
            it->second.pop_front();
            return f;
        }
        if (read_error_) std::rethrow_exception(read_error_);
        if (!reader_active_) {
            reader_active_ = true;
            lk.unlock();
            Frame f;
            try {
                f = read_frame();
            } catch (...) {
                lk.lock();
                reader_active_ = false;
                read_error_ = std::current_exception();
                cv_.notify_all();
                throw;
            }
            lk.lock();
            reader_active_ = false;
            if (tap_) tap_(f, false);
            inboxes_[f.session].push_back(std::move(f));
            cv_.notify_all();
        } else {
            cv_.wait(lk);
        }
    }
}

std::uint64_t Endpoint::bytes_sent(std::uint16_t session) const {
    std::lock_guard lk(mu_);
    auto it = bytes_sent_.find(session);
    return it == bytes_sent_.end() ? 0 : it->second;
}

std::uint64_t Endpoint::bytes_sent_total() const {
    std::lock_guard lk(mu_);
    std::uint64_t total = 0;
    for (auto& [s, b] : bytes_sent_) total += b;
    return total;
}

std::pair<std::unique_ptr<Endpoint>, std::unique_ptr<Endpoint>> Endpoint::loopback_pair() {
    auto ab = std::make_shared<Pipe>();
    auto ba = std::make_shared<Pipe>();
    auto a = std::make_unique<Endpoint>(std::make_unique<LoopbackChannel>(ba, ab));
    auto b = std::make_unique<Endpoint>(std::make_unique<LoopbackChannel>(ab, ba));
    return {std::move(a), std::move(b)};
}

std::unique_ptr<Endpoint> Endpoint::tcp_connect(const std::string& host, std::uint16_t port,
                                                int timeout_ms) {
    int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) throw transport_error("socket() failed");
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
        ::close(fd);
        throw transport_error("bad address: " + host);
    }
    int flags = ::fcntl(fd, F_GETFL, 0);
    ::fcntl(fd, F_SETFL, flags | O_NONBLOCK);
    int rc = ::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr));
    if (rc != 0 && errno != EINPROGRESS) {
        int err = errno;
        ::close(fd);
        throw transport_error("connect to " + host + ":" + std::to_string(port) +
                              " failed: " + std::strerror(err));
    }
    if (rc != 0) {
        pollfd pfd{fd, POLLOUT, 0};
        int pr = ::poll(&pfd, 1, timeout_ms);
        if (pr <= 0) {
            ::close(fd);
            throw transport_error("connect to " + host + ":" + std::to_string(port) +
                                  (pr == 0 ? " timed out" : " poll failed"));
        }
        int err = 0;
        socklen_t len = sizeof(err);
        ::getsockopt(fd, SOL_SOCKET, SO_ERROR, &err, &len);
        if (err != 0) {
            ::close(fd);
            throw transport_error("connect to " + host + ":" + std::to_string(port) +
                                  " failed: " + std::strerror(err));
        }
    }
    ::fcntl(fd, F_SETFL, flags);
    return std::make_unique<Endpoint>(std::make_unique<TcpChannel>(fd));
}

TcpListener::TcpListener(std::uint16_t port, const std::string& bind_addr) {
    fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd_ < 0) throw transport_error("socket() failed");
    int one = 1;
    ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    if (::inet_pton(AF_INET, bind_addr.c_str(), &addr.sin_addr) != 1) {
        ::close(fd_);
        throw transport_error("bad bind address: " + bind_addr);
    }
    if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
        int err = errno;
        ::close(fd_);
        throw transport_error("bind " + bind_addr + ":" + std::to_string(port) +
                              " failed: " + std::strerror(err));
    }
    if (::listen(fd_, 4) != 0) {
        int err = errno;
        ::close(fd_);
        throw transport_error(std::string("listen failed: ") + std::strerror(err));
    }
    sockaddr_in bound{};
    socklen_t blen = sizeof(bound);
    ::getsockname(fd_, reinterpret_cast<sockaddr*>(&bound), &blen);
    port_ = ntohs(bound.sin_port);
}

TcpListener::~TcpListener() {
    if (fd_ >= 0) ::close(fd_);
}

std::unique_ptr<Endpoint> TcpListener::accept(int timeout_ms) {
    pollfd pfd{fd_, POLLIN, 0};
    int pr = ::poll(&pfd, 1, timeout_ms);
    if (pr <= 0) throw transport_error("accept timed out");
    int cfd = ::accept(fd_, nullptr, nullptr);
    if (cfd < 0) throw transport_error(std::string("accept failed: ") + std::strerror(errno));
    return std::make_unique<Endpoint>(std::make_unique<TcpChannel>(cfd));
}

}  // namespace ironman
