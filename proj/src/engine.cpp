#include "ironman/engine.hpp"

#include <chrono>
#include <cstring>
#include <thread>

namespace ironman {

namespace {

constexpr std::uint8_t kTagTreeSeed = 0xA0;
constexpr std::uint8_t kTagAlpha = 0xA1;

Block tree_seed_for(Block session_seed, std::uint32_t tree) {
    return crhf(session_seed, tweaks::make(tree, kTagTreeSeed, 0));
}

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

void run_handshake(Session& session, const EngineConfig& cfg, int role) {
    Block digest = handshake_digest(cfg);
    std::uint8_t payload[17];
    payload[0] = static_cast<std::uint8_t>(role);
    digest.store_le(payload + 1);
    session.send(MsgType::Control, payload);
    Frame peer = session.recv_expect(MsgType::Control);
    if (peer.payload.size() != 17) throw protocol_error("handshake: bad payload");
    if (peer.payload[0] == role) throw protocol_error("handshake: both parties chose the same role");
    Block peer_digest = Block::load_le(peer.payload.data() + 1);
    if (!(peer_digest == digest))
        throw protocol_error("handshake: parameter/matrix-seed digest mismatch");
}

}  // namespace

std::size_t EngineConfig::effective_ell() const {
    std::size_t l = 1;
    while (l < params.ell) l *= static_cast<std::size_t>(fanout);
    return l;
}

int EngineConfig::tree_depth() const {
    std::size_t l = 1;
    int d = 0;
    while (l < params.ell) {
        l *= static_cast<std::size_t>(fanout);
        ++d;
    }
    return d < 1 ? 1 : d;
}

std::size_t EngineConfig::default_reserve() const {
    std::size_t log2_ell = 0;
    for (std::size_t l = 1; l < effective_ell(); l <<= 1) ++log2_ell;
    return params.k + params.t * log2_ell;
}

void EngineConfig::check() const {
    if (!valid_prg_pairing(kind, fanout)) throw config_error("EngineConfig: invalid (kind, fanout) pairing");
    if (fanout != 2 && fanout != 4) throw config_error("EngineConfig: fanout must be 2 or 4");
    params.validate(effective_ell());
    NoiseLayout layout = NoiseLayout::regular(params.n, params.t);
    if (layout.max_block() > effective_ell())
        throw config_error("EngineConfig: noise block exceeds tree leaf count");
    if (reserve() >= params.n) throw config_error("EngineConfig: reservation consumes all outputs");
    if (cohort_size < 1) throw config_error("EngineConfig: cohort_size must be >= 1");
}

NoiseLayout NoiseLayout::regular(std::size_t n, std::size_t t) {
    if (t == 0 || t > n) throw config_error("NoiseLayout: need 1 <= t <= n");
    const std::size_t b = (n + t - 1) / t;
    if ((t - 1) * b >= n) throw config_error("NoiseLayout: degenerate (n, t) split");
    NoiseLayout layout;
    layout.starts.resize(t + 1);
    for (std::size_t i = 0; i < t; ++i) layout.starts[i] = i * b;
    layout.starts[t] = n;
    return layout;
}

std::size_t NoiseLayout::max_block() const {
    std::size_t m = 0;
    for (std::size_t i = 0; i + 1 < starts.size(); ++i) m = std::max(m, starts[i + 1] - starts[i]);
    return m;
}

Block handshake_digest(const EngineConfig& cfg) {
    std::vector<std::uint8_t> canon;
    auto put_u64 = [&](std::uint64_t v) {
        for (int i = 0; i < 8; ++i) canon.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    };
    put_u64(cfg.params.n);
    put_u64(cfg.params.k);
    put_u64(cfg.params.t);
    put_u64(cfg.params.ell);
    put_u64(static_cast<std::uint64_t>(cfg.params.d));
    put_u64(static_cast<std::uint64_t>(cfg.fanout));
    put_u64(static_cast<std::uint64_t>(cfg.kind.variant));
    put_u64(static_cast<std::uint64_t>(cfg.kind.rounds));
    put_u64(cfg.reserve());
    std::uint8_t seed_raw[16];
    cfg.matrix_seed.store_le(seed_raw);
    canon.insert(canon.end(), seed_raw, seed_raw + 16);

    Block acc{0x4952'4e48, canon.size()};  // "IRNH" | length
    std::uint32_t chunk_no = 0;
    for (std::size_t off = 0; off < canon.size(); off += 16) {
        std::uint8_t chunk[16] = {0};
        std::memcpy(chunk, canon.data() + off, std::min<std::size_t>(16, canon.size() - off));
        acc = crhf(acc ^ Block::load_le(chunk), tweaks::make(0, tweaks::kHandshake, chunk_no++));
    }
    return acc;
}

SenderIteration extend_iteration_sender(Session& session, SenderCotPool pool,
                                        const EngineConfig& cfg, const MatrixRef& matrix,
                                        Block session_seed, SessionStats* stats) {
    auto t0 = std::chrono::steady_clock::now();
    cfg.check();
    const std::uint64_t bytes0 = session.bytes_sent();
    const std::size_t consumed0 = pool.consumed();
    run_handshake(session, cfg, 0);

    const std::size_t ell = cfg.effective_ell();
    const auto layout = NoiseLayout::regular(cfg.params.n, cfg.params.t);
    PrgCallCounter expand_counter, aux_counter;

    std::vector<Block> w(cfg.params.n);
    const std::size_t t = cfg.params.t;
    for (std::size_t base = 0; base < t; base += cfg.cohort_size) {
        const std::size_t batch = std::min(cfg.cohort_size, t - base);
        std::vector<Block> seeds(batch);
        for (std::size_t i = 0; i < batch; ++i)
            seeds[i] = tree_seed_for(session_seed, static_cast<std::uint32_t>(base + i));
        auto trees = expand_cohort(seeds, cfg.fanout, cfg.tree_depth(), cfg.kind,
                                   static_cast<std::uint32_t>(base), &expand_counter);
        for (std::size_t i = 0; i < batch; ++i) {
            const std::size_t tree = base + i;
            SpcotConfig scfg{ell, cfg.fanout, cfg.kind, static_cast<std::uint32_t>(tree)};
            auto out = spcot_send_from_tree(session, pool, pool.delta(), scfg, trees[i], seeds[i],
                                            &aux_counter);
            std::memcpy(w.data() + layout.start(tree), out.w.data(),
                        layout.size(tree) * sizeof(Block));
        }
    }

    // LPN encode: z = rA ⊕ w
    std::vector<Block> r(cfg.params.k);
    for (auto& b : r) b = pool.next();
    std::vector<Block> z;
    if (matrix.sorted) {
        auto pr = permute_vector(r, matrix.sorted->perm);
        z = encode_sorted(*matrix.sorted, pr, w);
    } else if (matrix.plain) {
        z = encode_blocks(*matrix.plain, r, w);
    } else {
        throw config_error("extend_iteration: no matrix supplied");
    }

    auto [next_pool, emitted] = pool_reserve(SenderBatch{pool.delta(), std::move(z)}, cfg.reserve());
    if (stats) {
        stats->spcot_prg_calls = expand_counter.ops;
        stats->aux_prg_calls = aux_counter.ops;
        stats->base_consumed = pool.consumed() - consumed0;
        stats->bytes_sent = session.bytes_sent() - bytes0;
        stats->emitted = emitted.w.size();
        stats->reserved = cfg.reserve();
        stats->wall_ms = ms_since(t0);
    }
    return SenderIteration{std::move(next_pool), std::move(emitted)};
}

ReceiverIteration extend_iteration_receiver(Session& session, ReceiverCotPool pool,
                                            const EngineConfig& cfg, const MatrixRef& matrix,
                                            Block session_seed, SessionStats* stats) {
    auto t0 = std::chrono::steady_clock::now();
    cfg.check();
    const std::uint64_t bytes0 = session.bytes_sent();
    const std::size_t consumed0 = pool.consumed();
    run_handshake(session, cfg, 1);

    const std::size_t ell = cfg.effective_ell();
    const auto layout = NoiseLayout::regular(cfg.params.n, cfg.params.t);
    PrgCallCounter expand_counter, aux_counter;
    PrgStream alpha_stream(crhf(session_seed, tweaks::make(0, kTagAlpha, 0)));

    std::vector<Block> v(cfg.params.n);
    BitVec u(cfg.params.n);
    for (std::size_t tree = 0; tree < cfg.params.t; ++tree) {
        const std::size_t block_size = layout.size(tree);
        const std::size_t alpha = alpha_stream.next_u32_below(static_cast<std::uint32_t>(block_size));
        SpcotConfig scfg{ell, cfg.fanout, cfg.kind, static_cast<std::uint32_t>(tree)};
        auto out = spcot_receive(session, pool, scfg, alpha, &expand_counter, &aux_counter);
        std::memcpy(v.data() + layout.start(tree), out.v.data(), block_size * sizeof(Block));
        u.set(layout.start(tree) + alpha, true);
    }

    // LPN encode: x = eA ⊕ u, y = sA ⊕ v
    std::vector<Block> s(cfg.params.k);
    BitVec e(cfg.params.k);
    for (std::size_t i = 0; i < cfg.params.k; ++i) {
        auto entry = pool.next();
        s[i] = entry.rb;
        e.set(i, entry.b);
    }
    BitVec x;
    std::vector<Block> y;
    if (matrix.sorted) {
        auto ps = permute_vector(s, matrix.sorted->perm);
        auto pe = permute_bits(e, matrix.sorted->perm);
        x = encode_sorted_bits(*matrix.sorted, pe, u);
        y = encode_sorted(*matrix.sorted, ps, v);
    } else if (matrix.plain) {
        x = encode_bits(*matrix.plain, e, u);
        y = encode_blocks(*matrix.plain, s, v);
    } else {
        throw config_error("extend_iteration: no matrix supplied");
    }

    ReceiverBatch full;
    full.x = std::move(x);
    full.y = std::move(y);
    auto [next_pool, emitted] = pool_reserve(std::move(full), cfg.reserve());
    if (stats) {
        stats->spcot_prg_calls = expand_counter.ops;
        stats->aux_prg_calls = aux_counter.ops;
        stats->base_consumed = pool.consumed() - consumed0;
        stats->bytes_sent = session.bytes_sent() - bytes0;
        stats->emitted = emitted.y.size();
        stats->reserved = cfg.reserve();
        stats->wall_ms = ms_since(t0);
    }
    return ReceiverIteration{std::move(next_pool), std::move(emitted)};
}

OtCiphertexts batch_ot_send(SenderBatch& batch, Block m0, Block m1, int d) {
    if (batch.cursor >= batch.w.size()) throw pool_exhausted_error{};
    const std::uint64_t tweak = tweaks::open_ot(batch.cursor);
    Block r0 = batch.w[batch.cursor++];
    Block r1 = r0 ^ batch.delta.value;
    Block rd0 = (d & 1) ? r1 : r0;
    Block rd1 = (d & 1) ? r0 : r1;
    return OtCiphertexts{m0 ^ crhf(rd0, tweak), m1 ^ crhf(rd1, tweak)};
}

BatchOtReceiver batch_ot_receive(ReceiverBatch& batch, int choice) {
    if (batch.cursor >= batch.y.size()) throw pool_exhausted_error{};
    const std::uint64_t tweak = tweaks::open_ot(batch.cursor);
    bool b = batch.x.get(batch.cursor);
    Block rb = batch.y[batch.cursor++];
    BatchOtReceiver r;
    r.choice = choice & 1;
    r.d = (b ? 1 : 0) ^ r.choice;
    r.mask = crhf(rb, tweak);
    return r;
}

DuplexResult run_duplex(Endpoint& endpoint, const EngineConfig& cfg, int party,
                        SenderCotPool sender_pool, ReceiverCotPool receiver_pool,
                        Block sender_session_seed, Block receiver_session_seed,
                        const MatrixRef& matrix) {
    // session 1: party 0 sends; session 2: party 1 sends
    EngineConfig send_cfg = cfg;
    EngineConfig recv_cfg = cfg;
    send_cfg.session_id = party == 0 ? 1 : 2;
    recv_cfg.session_id = party == 0 ? 2 : 1;
    if (send_cfg.session_id == recv_cfg.session_id)
        throw std::invalid_argument("run_duplex: session collision");

    Session send_session(endpoint, send_cfg.session_id);
    Session recv_session(endpoint, recv_cfg.session_id);

    std::optional<SenderIteration> sent;
    std::optional<ReceiverIteration> received;
    SessionStats s_stats, r_stats;
    std::exception_ptr worker_error;

    std::thread worker([&] {
        try {
            sent.emplace(extend_iteration_sender(send_session, std::move(sender_pool), send_cfg,
                                                 matrix, sender_session_seed, &s_stats));
        } catch (...) {
            worker_error = std::current_exception();
        }
    });
    std::exception_ptr main_error;
    try {
        received.emplace(extend_iteration_receiver(recv_session, std::move(receiver_pool),
                                                   recv_cfg, matrix, receiver_session_seed,
                                                   &r_stats));
    } catch (...) {
        main_error = std::current_exception();
    }
    worker.join();
    if (main_error) std::rethrow_exception(main_error);
    if (worker_error) std::rethrow_exception(worker_error);

    return DuplexResult{std::move(*sent), std::move(*received), s_stats, r_stats};
}

}  // namespace ironman
