#pragma once

// Shared glue for protocol tests: runs the two roles of one iteration on a
// loopback (or any endpoint pair) with exception propagation.

#include <exception>
#include <optional>
#include <thread>

#include "ironman/engine.hpp"
#include "ironman/io.hpp"
#include "ironman/params.hpp"

namespace harness {

using namespace ironman;

struct IterationRun {
    SenderIteration sender;
    ReceiverIteration receiver;
    SessionStats sender_stats;
    SessionStats receiver_stats;
};

inline IterationRun run_iteration(Endpoint& sender_ep, Endpoint& receiver_ep,
                                  const EngineConfig& cfg, const MatrixRef& matrix,
                                  SenderCotPool spool, ReceiverCotPool rpool, Block sender_seed,
                                  Block receiver_seed) {
    Session ss(sender_ep, cfg.session_id);
    Session rs(receiver_ep, cfg.session_id);

    std::optional<SenderIteration> sent;
    SessionStats s_stats, r_stats;
    std::exception_ptr sender_error;
    std::thread sender_thread([&] {
        try {
            sent.emplace(
                extend_iteration_sender(ss, std::move(spool), cfg, matrix, sender_seed, &s_stats));
        } catch (...) {
            sender_error = std::current_exception();
        }
    });

    std::optional<ReceiverIteration> received;
    std::exception_ptr receiver_error;
    try {
        received.emplace(extend_iteration_receiver(rs, std::move(rpool), cfg, matrix,
                                                   receiver_seed, &r_stats));
    } catch (...) {
        receiver_error = std::current_exception();
    }
    sender_thread.join();
    if (receiver_error) std::rethrow_exception(receiver_error);
    if (sender_error) std::rethrow_exception(sender_error);
    return IterationRun{std::move(*sent), std::move(*received), s_stats, r_stats};
}

inline IterationRun run_loopback_iteration(const EngineConfig& cfg, const MatrixRef& matrix,
                                           SenderCotPool spool, ReceiverCotPool rpool,
                                           Block sender_seed, Block receiver_seed) {
    auto [a, b] = Endpoint::loopback_pair();
    return run_iteration(*a, *b, cfg, matrix, std::move(spool), std::move(rpool), sender_seed,
                         receiver_seed);
}

inline EngineConfig toy_config(int fanout = 2, PrgKind kind = PrgKind::stream()) {
    EngineConfig cfg;
    cfg.params = *find_preset("toy");
    cfg.fanout = fanout;
    cfg.kind = kind;
    cfg.matrix_seed = Block{0x4D41'5452, 0x5345'4544};
    return cfg;
}

}  // namespace harness
