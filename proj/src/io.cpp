#include "ironman/io.hpp"

#include <cstring>
#include <fstream>

namespace ironman {

namespace {

constexpr std::uint16_t kVersion = 1;

class Writer {
public:
    explicit Writer(const std::filesystem::path& path) : out_(path, std::ios::binary) {
        if (!out_) throw io_error("cannot open for writing: " + path.string());
    }
    void bytes(const void* p, std::size_t n) {
        out_.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
        if (!out_) throw io_error("write failed");
    }
    void magic(const char m[4]) { bytes(m, 4); }
    void u16(std::uint16_t v) {
        std::uint8_t b[2] = {static_cast<std::uint8_t>(v), static_cast<std::uint8_t>(v >> 8)};
        bytes(b, 2);
    }
    void u32(std::uint32_t v) {
        std::uint8_t b[4];
        for (int i = 0; i < 4; ++i) b[i] = static_cast<std::uint8_t>(v >> (8 * i));
        bytes(b, 4);
    }
    void u64(std::uint64_t v) {
        std::uint8_t b[8];
        for (int i = 0; i < 8; ++i) b[i] = static_cast<std::uint8_t>(v >> (8 * i));
        bytes(b, 8);
    }
    void block(Block b) {
        std::uint8_t raw[16];
        b.store_le(raw);
        bytes(raw, 16);
    }
    void blocks(std::span<const Block> bs) {
        for (Block b : bs) block(b);
    }

private:
    std::ofstream out_;
};

class Reader {
public:
    explicit Reader(const std::filesystem::path& path) : in_(path, std::ios::binary) {
        if (!in_) throw io_error("cannot open for reading: " + path.string());
    }
    void bytes(void* p, std::size_t n) {
        in_.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
        if (in_.gcount() != static_cast<std::streamsize>(n))
            throw io_error("length mismatch: file truncated");
    }
    void expect_magic(const char m[4]) {
        char got[4];
        bytes(got, 4);
        if (std::memcmp(got, m, 4) != 0) throw io_error("magic mismatch");
    }
    std::uint16_t u16() {
        std::uint8_t b[2];
        bytes(b, 2);
        return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
    }
    std::uint32_t u32() {
        std::uint8_t b[4];
        bytes(b, 4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
        return v;
    }
    std::uint64_t u64() {
        std::uint8_t b[8];
        bytes(b, 8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
        return v;
    }
    Block block() {
        std::uint8_t raw[16];
        bytes(raw, 16);
        return Block::load_le(raw);
    }
    std::vector<Block> blocks(std::size_t count) {
        std::vector<Block> out(count);
        for (auto& b : out) b = block();
        return out;
    }
    void expect_version(std::uint16_t v) {
        if (u16() != v) throw io_error("version mismatch");
    }

private:
    std::ifstream in_;
};

void write_bits(Writer& w, const BitVec& bits) {
    auto bytes = bits.to_bytes();
    w.bytes(bytes.data(), bytes.size());
}

BitVec read_bits(Reader& r, std::size_t count) {
    std::vector<std::uint8_t> raw((count + 7) / 8);
    r.bytes(raw.data(), raw.size());
    return BitVec::from_bytes(raw, count);
}

}  // namespace

void save_sender_dump(const std::filesystem::path& path, const SenderBatch& batch) {
    Writer w(path);
    w.magic("IRNC");
    w.u16(kVersion);
    std::uint8_t role = 0;
    w.bytes(&role, 1);
    w.u64(batch.w.size());
    w.block(batch.delta.value);
    w.blocks(batch.w);
}

void save_receiver_dump(const std::filesystem::path& path, const ReceiverBatch& batch) {
    Writer w(path);
    w.magic("IRNC");
    w.u16(kVersion);
    std::uint8_t role = 1;
    w.bytes(&role, 1);
    w.u64(batch.y.size());
    write_bits(w, batch.x);
    w.blocks(batch.y);
}

SenderBatch load_sender_dump(const std::filesystem::path& path) {
    Reader r(path);
    r.expect_magic("IRNC");
    r.expect_version(kVersion);
    std::uint8_t role;
    r.bytes(&role, 1);
    if (role != 0) throw io_error("dump role mismatch: expected sender file");
    std::uint64_t count = r.u64();
    Delta delta(r.block());
    return SenderBatch{delta, r.blocks(count)};
}

ReceiverBatch load_receiver_dump(const std::filesystem::path& path) {
    Reader r(path);
    r.expect_magic("IRNC");
    r.expect_version(kVersion);
    std::uint8_t role;
    r.bytes(&role, 1);
    if (role != 1) throw io_error("dump role mismatch: expected receiver file");
    std::uint64_t count = r.u64();
    ReceiverBatch b;
    b.x = read_bits(r, count);
    b.y = r.blocks(count);
    return b;
}

VerifyReport verify_batches(const SenderBatch& sender, const ReceiverBatch& receiver) {
    if (sender.w.size() != receiver.y.size())
        throw io_error("length mismatch between sender and receiver dumps");
    VerifyReport rep;
    rep.total = sender.w.size();
    for (std::size_t i = 0; i < sender.w.size(); ++i) {
        Block expect = receiver.x.get(i) ? receiver.y[i] ^ sender.delta.value : receiver.y[i];
        if (expect == sender.w[i]) {
            ++rep.valid;
        } else if (!rep.first_invalid) {
            rep.first_invalid = i;
        }
    }
    return rep;
}

void save_dealer_sender(const std::filesystem::path& path, const SenderCotPool& pool) {
    Writer w(path);
    w.magic("IRNB");
    w.u16(kVersion);
    w.u64(pool.size());
    w.block(pool.delta().value);
    w.blocks(pool.blocks());
}

void save_dealer_receiver(const std::filesystem::path& path, const ReceiverCotPool& pool) {
    Writer w(path);
    w.magic("IRNB");
    w.u16(kVersion);
    w.u64(pool.size());
    write_bits(w, pool.bits());
    w.blocks(pool.blocks());
}

SenderCotPool load_dealer_sender(const std::filesystem::path& path) {
    Reader r(path);
    r.expect_magic("IRNB");
    r.expect_version(kVersion);
    std::uint64_t count = r.u64();
    Delta delta(r.block());
    return SenderCotPool(delta, r.blocks(count));
}

ReceiverCotPool load_dealer_receiver(const std::filesystem::path& path) {
    Reader r(path);
    r.expect_magic("IRNB");
    r.expect_version(kVersion);
    std::uint64_t count = r.u64();
    BitVec bits = read_bits(r, count);
    return ReceiverCotPool(std::move(bits), r.blocks(count));
}

void save_matrix(const std::filesystem::path& path, const SparseMatrix& a) {
    Writer w(path);
    w.magic("IRNA");
    w.u16(kVersion);
    w.u64(a.n);
    w.u64(a.k);
    w.u16(static_cast<std::uint16_t>(a.d));
    for (auto c : a.colidx) w.u32(c);
}

SparseMatrix load_matrix(const std::filesystem::path& path) {
    Reader r(path);
    r.expect_magic("IRNA");
    r.expect_version(kVersion);
    SparseMatrix a;
    a.n = r.u64();
    a.k = r.u64();
    a.d = r.u16();
    a.colidx.resize(a.n * static_cast<std::size_t>(a.d));
    for (auto& c : a.colidx) c = r.u32();
    return a;
}

void save_sorted(const std::filesystem::path& path, const SortedCsr& s, const CacheConfig& cfg) {
    Writer w(path);
    w.magic("IRNS");
    w.u16(kVersion);
    w.u64(s.n);
    w.u64(s.k);
    w.u16(static_cast<std::uint16_t>(s.d));
    w.u32(s.window);
    w.u64(cfg.capacity_bytes);
    w.u32(static_cast<std::uint32_t>(cfg.line_bytes));
    w.u32(cfg.ways);
    w.u16(static_cast<std::uint16_t>(cfg.element_bytes));
    for (auto p : s.perm) w.u32(p);
    for (auto c : s.colidx) w.u32(c);
    for (auto rr : s.rowidx) w.u32(rr);
}

std::pair<SortedCsr, CacheConfig> load_sorted(const std::filesystem::path& path) {
    Reader r(path);
    r.expect_magic("IRNS");
    r.expect_version(kVersion);
    SortedCsr s;
    CacheConfig cfg;
    s.n = r.u64();
    s.k = r.u64();
    s.d = r.u16();
    s.window = r.u32();
    cfg.capacity_bytes = r.u64();
    cfg.line_bytes = r.u32();
    cfg.ways = r.u32();
    cfg.element_bytes = r.u16();
    s.perm.resize(s.k);
    for (auto& p : s.perm) p = r.u32();
    const std::size_t entries = s.n * static_cast<std::size_t>(s.d);
    s.colidx.resize(entries);
    for (auto& c : s.colidx) c = r.u32();
    s.rowidx.resize(entries);
    for (auto& rr : s.rowidx) rr = r.u32();
    return {std::move(s), cfg};
}

}  // namespace ironman
