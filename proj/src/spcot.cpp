#include "ironman/spcot.hpp"

#include <stdexcept>

namespace ironman {

namespace {

// Mini trees live in a separate tree-id namespace so their expansion tweaks
// never collide with main-tree nodes.
std::uint32_t mini_tree_id(std::uint32_t tree_id, int level) {
    return 0x80000000u | (tree_id << 4) | static_cast<std::uint32_t>(level & 0xF);
}

void put_block(std::vector<std::uint8_t>& buf, Block b) {
    std::uint8_t raw[16];
    b.store_le(raw);
    buf.insert(buf.end(), raw, raw + 16);
}

Block get_block(std::span<const std::uint8_t> payload, std::size_t index) {
    return Block::load_le(payload.data() + 16 * index);
}

}  // namespace

int SpcotConfig::depth() const {
    if (fanout < 2) throw config_error("SpcotConfig: fanout must be >= 2");
    std::size_t l = 1;
    int d = 0;
    while (l < ell) {
        l *= static_cast<std::size_t>(fanout);
        ++d;
    }
    if (l != ell || d < 1) throw config_error("SpcotConfig: ell must be a positive power of fanout");
    return d;
}

Block derive_mini_seed(Block tree_seed, std::uint32_t tree_id, int level) {
    return crhf(tree_seed, tweaks::make(mini_tree_id(tree_id, level), tweaks::kMiniSeed, 0));
}

std::vector<int> alpha_digits(std::size_t alpha, int fanout, int depth) {
    std::vector<int> digits(depth);
    for (int i = depth - 1; i >= 0; --i) {
        digits[i] = static_cast<int>(alpha % static_cast<std::size_t>(fanout));
        alpha /= static_cast<std::size_t>(fanout);
    }
    if (alpha != 0) throw std::invalid_argument("alpha_digits: alpha out of range");
    return digits;
}

void oblivious_class_sums_send(Session& session, SenderCotPool& pool, const LevelSums& sums,
                               const SpcotConfig& cfg, int level, Block mini_seed,
                               PrgCallCounter* aux_counter) {
    const std::uint32_t mid = mini_tree_id(cfg.tree_id, level);
    if (cfg.fanout == 2) {
        Frame corr = session.recv_expect(MsgType::LevelOtCorr);
        if (corr.payload.size() != 1) throw protocol_error("level OT: bad correction payload");
        int d = corr.payload[0] & 1;
        auto ct = ot_send(pool, sums.sums[0], sums.sums[1], d,
                          tweaks::make(mid, tweaks::kLevelOt, 0));
        std::vector<std::uint8_t> payload;
        put_block(payload, ct.c0);
        put_block(payload, ct.c1);
        session.send(MsgType::LevelOtCt, payload);
        return;
    }
    if (cfg.fanout != 4) throw config_error("oblivious_class_sums_send: fanout must be 2 or 4");

    GgmTree mini = expand_full_tree(mini_seed, 2, 2, cfg.kind, mid, aux_counter);
    auto q = mini.leaves();

    Frame corr = session.recv_expect(MsgType::LevelOtCorr);
    if (corr.payload.size() != 1) throw protocol_error("level OT: bad correction payload");
    int d1 = corr.payload[0] & 1;
    int d2 = (corr.payload[0] >> 1) & 1;

    auto k1 = level_class_sums(mini, 1);
    auto k2 = level_class_sums(mini, 2);
    auto ct1 = ot_send(pool, k1.sums[0], k1.sums[1], d1, tweaks::make(mid, tweaks::kLevelOt, 1));
    auto ct2 = ot_send(pool, k2.sums[0], k2.sums[1], d2, tweaks::make(mid, tweaks::kLevelOt, 2));

    std::vector<std::uint8_t> payload;
    put_block(payload, ct1.c0);
    put_block(payload, ct1.c1);
    put_block(payload, ct2.c0);
    put_block(payload, ct2.c1);
    for (int j = 0; j < 4; ++j)
        put_block(payload, sums.sums[static_cast<std::size_t>(j)] ^
                               crhf(q[static_cast<std::size_t>(j)],
                                    tweaks::make(mid, tweaks::kClassSumCt,
                                                 static_cast<std::uint32_t>(j))));
    session.send(MsgType::LevelOtCt, payload);
}

std::vector<std::pair<int, Block>> oblivious_class_sums_receive(Session& session,
                                                                ReceiverCotPool& pool,
                                                                const SpcotConfig& cfg, int level,
                                                                int withheld_class,
                                                                PrgCallCounter* aux_counter) {
    const std::uint32_t mid = mini_tree_id(cfg.tree_id, level);
    if (cfg.fanout == 2) {
        int choice = 1 - (withheld_class & 1);
        auto ot = ot_receive(pool, choice, tweaks::make(mid, tweaks::kLevelOt, 0));
        std::uint8_t corr = static_cast<std::uint8_t>(ot.d);
        session.send(MsgType::LevelOtCorr, {&corr, 1});
        Frame ctf = session.recv_expect(MsgType::LevelOtCt);
        if (ctf.payload.size() != 32) throw protocol_error("level OT: bad ciphertext payload");
        OtCiphertexts ct{get_block(ctf.payload, 0), get_block(ctf.payload, 1)};
        return {{choice, ot.decode(ct)}};
    }
    if (cfg.fanout != 4) throw config_error("oblivious_class_sums_receive: fanout must be 2 or 4");
    if (withheld_class < 0 || withheld_class > 3)
        throw std::invalid_argument("oblivious_class_sums_receive: class out of range");

    const int b1 = (withheld_class >> 1) & 1;
    const int b2 = withheld_class & 1;
    auto ot1 = ot_receive(pool, 1 - b1, tweaks::make(mid, tweaks::kLevelOt, 1));
    auto ot2 = ot_receive(pool, 1 - b2, tweaks::make(mid, tweaks::kLevelOt, 2));
    std::uint8_t corr = static_cast<std::uint8_t>(ot1.d | (ot2.d << 1));
    session.send(MsgType::LevelOtCorr, {&corr, 1});

    Frame ctf = session.recv_expect(MsgType::LevelOtCt);
    if (ctf.payload.size() != 4 * 16 + 4 * 16)
        throw protocol_error("level OT: bad ciphertext payload");
    OtCiphertexts ct1{get_block(ctf.payload, 0), get_block(ctf.payload, 1)};
    OtCiphertexts ct2{get_block(ctf.payload, 2), get_block(ctf.payload, 3)};

    const int digits[2] = {b1, b2};
    PuncturedTree mini(2, 2, digits);
    std::pair<int, Block> s1{1 - b1, ot1.decode(ct1)};
    mini.reconstruct_level(1, {&s1, 1}, cfg.kind, mid, aux_counter);
    std::pair<int, Block> s2{1 - b2, ot2.decode(ct2)};
    mini.reconstruct_level(2, {&s2, 1}, cfg.kind, mid, aux_counter);
    auto q = mini.leaves();

    std::vector<std::pair<int, Block>> out;
    out.reserve(3);
    for (int j = 0; j < 4; ++j) {
        if (j == withheld_class) continue;
        Block cs = get_block(ctf.payload, static_cast<std::size_t>(4 + j));
        out.emplace_back(j, cs ^ crhf(q[static_cast<std::size_t>(j)],
                                      tweaks::make(mid, tweaks::kClassSumCt,
                                                   static_cast<std::uint32_t>(j))));
    }
    return out;
}

SpcotSenderOutput spcot_send_from_tree(Session& session, SenderCotPool& pool, const Delta& delta,
                                       const SpcotConfig& cfg, const GgmTree& tree,
                                       Block tree_seed, PrgCallCounter* aux_counter) {
    const int depth = cfg.depth();
    if (tree.depth != depth || tree.fanout != cfg.fanout)
        throw config_error("spcot_send_from_tree: tree shape mismatch");
    for (int level = 1; level <= depth; ++level) {
        auto sums = level_class_sums(tree, level);
        oblivious_class_sums_send(session, pool, sums, cfg, level,
                                  derive_mini_seed(tree_seed, cfg.tree_id, level), aux_counter);
    }
    Block psi = delta.value ^ xor_all(tree.leaves());
    std::vector<std::uint8_t> payload;
    put_block(payload, psi);
    session.send(MsgType::Psi, payload);

    SpcotSenderOutput out;
    out.w.assign(tree.leaves().begin(), tree.leaves().end());
    return out;
}

SpcotSenderOutput spcot_send(Session& session, SenderCotPool& pool, const Delta& delta,
                             const SpcotConfig& cfg, Block tree_seed,
                             PrgCallCounter* expand_counter, PrgCallCounter* aux_counter) {
    const int depth = cfg.depth();
    GgmTree tree = expand_full_tree(tree_seed, cfg.fanout, depth, cfg.kind, cfg.tree_id,
                                    expand_counter);
    return spcot_send_from_tree(session, pool, delta, cfg, tree, tree_seed, aux_counter);
}

SpcotReceiverOutput spcot_receive(Session& session, ReceiverCotPool& pool, const SpcotConfig& cfg,
                                  std::size_t alpha, PrgCallCounter* expand_counter,
                                  PrgCallCounter* aux_counter) {
    const int depth = cfg.depth();
    if (alpha >= cfg.ell) throw std::invalid_argument("spcot_receive: alpha out of range");
    auto digits = alpha_digits(alpha, cfg.fanout, depth);
    PuncturedTree tree(cfg.fanout, depth, digits);
    for (int level = 1; level <= depth; ++level) {
        auto sums =
            oblivious_class_sums_receive(session, pool, cfg, level, digits[level - 1], aux_counter);
        tree.reconstruct_level(level, sums, cfg.kind, cfg.tree_id, expand_counter);
    }
    Frame psif = session.recv_expect(MsgType::Psi);
    if (psif.payload.size() != 16) throw protocol_error("psi: bad payload size");
    Block psi = get_block(psif.payload, 0);

    SpcotReceiverOutput out;
    out.alpha = alpha;
    out.v.assign(tree.leaves().begin(), tree.leaves().end());
    out.v[alpha] = recover_punctured_leaf(tree, psi);
    return out;
}

}  // namespace ironman
