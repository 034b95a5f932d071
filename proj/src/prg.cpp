#include "ironman/prg.hpp"

#include <openssl/evp.h>

#include <bit>
#include <cstring>

namespace ironman {

namespace {

// "expand 32-byte k" — the standard stream-cipher constant schedule. The
// 128-bit seed is loaded twice to fill the 256-bit key slots.
constexpr std::uint32_t kSigma[4] = {0x61707865, 0x3320646e, 0x79622d32, 0x6b206574};

// domain tags for state word 14
constexpr std::uint32_t kTagExpand = 0x45585044;  // "EXPD"
constexpr std::uint32_t kTagStream = 0x53545245;  // "STRE"
constexpr std::uint32_t kTagCrhf = 0x43524846;    // "CRHF"

inline void quarter_round(std::uint32_t& a, std::uint32_t& b, std::uint32_t& c, std::uint32_t& d) {
    a += b; d ^= a; d = std::rotl(d, 16);
    c += d; b ^= c; b = std::rotl(b, 12);
    a += b; d ^= a; d = std::rotl(d, 8);
    c += d; b ^= c; b = std::rotl(b, 7);
}

void stream_core(Block seed, std::uint64_t counter, std::uint32_t tag, int rounds,
                 std::uint32_t out[16]) {
    std::uint32_t s[16];
    s[0] = kSigma[0]; s[1] = kSigma[1]; s[2] = kSigma[2]; s[3] = kSigma[3];
    s[4] = static_cast<std::uint32_t>(seed.lo);
    s[5] = static_cast<std::uint32_t>(seed.lo >> 32);
    s[6] = static_cast<std::uint32_t>(seed.hi);
    s[7] = static_cast<std::uint32_t>(seed.hi >> 32);
    s[8] = s[4]; s[9] = s[5]; s[10] = s[6]; s[11] = s[7];
    s[12] = static_cast<std::uint32_t>(counter);
    s[13] = static_cast<std::uint32_t>(counter >> 32);
    s[14] = tag;
    s[15] = 0;

    std::uint32_t x[16];
    std::memcpy(x, s, sizeof(x));
    for (int r = 0; r < rounds; r += 2) {
        quarter_round(x[0], x[4], x[8], x[12]);
        quarter_round(x[1], x[5], x[9], x[13]);
        quarter_round(x[2], x[6], x[10], x[14]);
        quarter_round(x[3], x[7], x[11], x[15]);
        quarter_round(x[0], x[5], x[10], x[15]);
        quarter_round(x[1], x[6], x[11], x[12]);
        quarter_round(x[2], x[7], x[8], x[13]);
        quarter_round(x[3], x[4], x[9], x[14]);
    }
    for (int i = 0; i < 16; ++i) out[i] = x[i] + s[i];
}

inline Block block_from_words(const std::uint32_t* w) {
    return Block{static_cast<std::uint64_t>(w[0]) | (static_cast<std::uint64_t>(w[1]) << 32),
                 static_cast<std::uint64_t>(w[2]) | (static_cast<std::uint64_t>(w[3]) << 32)};
}

// Public fixed keys for the baseline PRG; interop of this baseline across
// implementations is not guaranteed.
constexpr std::uint8_t kFixedKeys[4][16] = {
    {'f', 'i', 'x', 'e', 'd', '-', 'k', 'e', 'y', '-', 'p', 'r', 'g', '-', 'k', '0'},
    {'f', 'i', 'x', 'e', 'd', '-', 'k', 'e', 'y', '-', 'p', 'r', 'g', '-', 'k', '1'},
    {'f', 'i', 'x', 'e', 'd', '-', 'k', 'e', 'y', '-', 'p', 'r', 'g', '-', 'k', '2'},
    {'f', 'i', 'x', 'e', 'd', '-', 'k', 'e', 'y', '-', 'p', 'r', 'g', '-', 'k', '3'},
};

struct FixedKeyCtx {
    EVP_CIPHER_CTX* ctx[4] = {nullptr, nullptr, nullptr, nullptr};
    FixedKeyCtx() {
        for (int i = 0; i < 4; ++i) {
            ctx[i] = EVP_CIPHER_CTX_new();
            EVP_EncryptInit_ex(ctx[i], EVP_aes_128_ecb(), nullptr, kFixedKeys[i], nullptr);
            EVP_CIPHER_CTX_set_padding(ctx[i], 0);
        }
    }
    ~FixedKeyCtx() {
        for (auto* c : ctx) EVP_CIPHER_CTX_free(c);
    }
};

}  // namespace

Block fixed_key_perm(int key_index, Block x) {
    if (key_index < 0 || key_index >= 4) throw config_error("fixed_key_perm: key index out of range");
    thread_local FixedKeyCtx fk;
    std::uint8_t in[16], out[16];
    x.store_le(in);
    int outl = 0;
    EVP_EncryptUpdate(fk.ctx[key_index], out, &outl, in, 16);
    return Block::load_le(out);
}

std::size_t prg_expand(Block seed, PrgKind kind, std::uint64_t tweak, std::span<Block> out,
                       PrgCallCounter* counter) {
    switch (kind.variant) {
        case PrgVariant::DoubleFixedKey: {
            if (out.size() < 2) throw config_error("prg_expand: output span too small");
            out[0] = fixed_key_perm(0, seed) ^ seed;
            out[1] = fixed_key_perm(1, seed) ^ seed;
            if (counter) counter->ops += 2;
            return 2;
        }
        case PrgVariant::MultiOutputStream: {
            if (out.size() < 4) throw config_error("prg_expand: output span too small");
            std::uint32_t w[16];
            stream_core(seed, tweak, kTagExpand, kind.rounds, w);
            for (int i = 0; i < 4; ++i) out[i] = block_from_words(w + 4 * i);
            if (counter) counter->ops += 1;
            return 4;
        }
    }
    throw config_error("prg_expand: unknown variant");
}

std::vector<Block> prg_expand(Block seed, PrgKind kind, std::uint64_t tweak,
                              PrgCallCounter* counter) {
    std::vector<Block> out(kind.variant == PrgVariant::DoubleFixedKey ? 2 : 4);
    prg_expand(seed, kind, tweak, out, counter);
    return out;
}

Block crhf(Block x, std::uint64_t tweak) {
    std::uint32_t w[16];
    stream_core(x, tweak, kTagCrhf, 8, w);
    return block_from_words(w);
}

PrgStream::PrgStream(Block seed, int rounds) : seed_(seed), rounds_(rounds) {}

void PrgStream::refill() {
    std::uint32_t w[16];
    stream_core(seed_, block_counter_++, kTagStream, rounds_, w);
    for (int i = 0; i < 16; ++i) {
        buf_[4 * i + 0] = static_cast<std::uint8_t>(w[i]);
        buf_[4 * i + 1] = static_cast<std::uint8_t>(w[i] >> 8);
        buf_[4 * i + 2] = static_cast<std::uint8_t>(w[i] >> 16);
        buf_[4 * i + 3] = static_cast<std::uint8_t>(w[i] >> 24);
    }
    pos_ = 0;
}

void PrgStream::fill(std::span<std::uint8_t> out) {
    std::size_t done = 0;
    while (done < out.size()) {
        if (pos_ == 64) refill();
        std::size_t take = std::min<std::size_t>(64 - pos_, out.size() - done);
        std::memcpy(out.data() + done, buf_ + pos_, take);
        pos_ += take;
        done += take;
    }
}

std::uint8_t PrgStream::next_u8() {
    if (pos_ == 64) refill();
    return buf_[pos_++];
}

std::uint32_t PrgStream::next_u32_slow() {
    std::uint8_t b[4];
    fill(b);
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

std::uint64_t PrgStream::next_u64() {
    std::uint64_t lo = next_u32();
    std::uint64_t hi = next_u32();
    return lo | (hi << 32);
}

Block PrgStream::next_block() {
    std::uint8_t b[16];
    fill(b);
    return Block::load_le(b);
}

std::uint32_t PrgStream::next_u32_below(std::uint32_t bound) {
    // rejection keeps the draw exactly uniform
    return BoundedDraw(bound).next(*this);
}

std::vector<std::uint8_t> prg_stream(Block seed, std::size_t byte_count) {
    std::vector<std::uint8_t> out(byte_count);
    PrgStream s(seed);
    s.fill(out);
    return out;
}

}  // namespace ironman
