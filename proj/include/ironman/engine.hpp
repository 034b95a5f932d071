#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ironman/base_cot.hpp"
#include "ironman/lpn.hpp"
#include "ironman/spcot.hpp"
#include "ironman/transport.hpp"

namespace ironman {

struct EngineConfig {
    LpnParams params;
    int fanout = 4;
    PrgKind kind = PrgKind::stream();
    Block matrix_seed;
    std::size_t reserve_count = 0;  ///< 0 = k + t*log2(effective ell)
    std::uint16_t session_id = 1;
    std::size_t cohort_size = 8;

    /// ell rounded up to the next power of the fanout (surplus leaves are
    /// discarded by the noise layout).
    std::size_t effective_ell() const;
    int tree_depth() const;
    std::size_t default_reserve() const;
    std::size_t reserve() const { return reserve_count ? reserve_count : default_reserve(); }
    void check() const;
};

/// Regular noise placement: t contiguous blocks covering [0,n), one noise
/// position per block. Block sizes follow the ceil(n/t) prefix rule.
struct NoiseLayout {
    std::vector<std::size_t> starts;  ///< t+1 boundaries

    static NoiseLayout regular(std::size_t n, std::size_t t);
    std::size_t blocks() const { return starts.size() - 1; }
    std::size_t start(std::size_t i) const { return starts[i]; }
    std::size_t size(std::size_t i) const { return starts[i + 1] - starts[i]; }
    std::size_t max_block() const;
};

struct SessionStats {
    std::uint64_t spcot_prg_calls = 0;  ///< main-tree expansion cipher ops
    std::uint64_t aux_prg_calls = 0;    ///< mini-tree and reconstruction side work
    std::uint64_t base_consumed = 0;
    std::uint64_t bytes_sent = 0;
    std::size_t emitted = 0;
    std::size_t reserved = 0;
    double wall_ms = 0.0;
};

/// Either encode path; `sorted` wins when both are set.
struct MatrixRef {
    const SparseMatrix* plain = nullptr;
    const SortedCsr* sorted = nullptr;
};

struct SenderIteration {
    SenderCotPool next_pool;
    SenderBatch emitted;
};
struct ReceiverIteration {
    ReceiverCotPool next_pool;
    ReceiverBatch emitted;
};

/// One full extension iteration: handshake, t batched SPCOTs with regular
/// noise placement, local LPN encode, bootstrap reservation. The returned
/// pool carries exactly the correlations the next iteration consumes.
SenderIteration extend_iteration_sender(Session& session, SenderCotPool pool,
                                        const EngineConfig& cfg, const MatrixRef& matrix,
                                        Block session_seed, SessionStats* stats = nullptr);
ReceiverIteration extend_iteration_receiver(Session& session, ReceiverCotPool pool,
                                            const EngineConfig& cfg, const MatrixRef& matrix,
                                            Block session_seed, SessionStats* stats = nullptr);

/// Chosen-message OT consuming extension output (the online phase).
OtCiphertexts batch_ot_send(SenderBatch& batch, Block m0, Block m1, int d);
struct BatchOtReceiver {
    int d;
    Block decode(const OtCiphertexts& ct) const { return (choice == 0 ? ct.c0 : ct.c1) ^ mask; }
    int choice;
    Block mask;
};
BatchOtReceiver batch_ot_receive(ReceiverBatch& batch, int choice);

/// Both directions at once over one endpoint: session 1 has party 0 sending,
/// session 2 has party 1 sending; the two sessions run on concurrent workers
/// with independent deltas.
struct DuplexResult {
    SenderIteration as_sender;
    ReceiverIteration as_receiver;
    SessionStats sender_stats;
    SessionStats receiver_stats;
};
DuplexResult run_duplex(Endpoint& endpoint, const EngineConfig& cfg, int party,
                        SenderCotPool sender_pool, ReceiverCotPool receiver_pool,
                        Block sender_session_seed, Block receiver_session_seed,
                        const MatrixRef& matrix);

/// Canonical digest of everything both parties must agree on before any
/// SPCOT message flows.
Block handshake_digest(const EngineConfig& cfg);

}  // namespace ironman
