// Command-line front end: protocol runs, dump verification, operation-count
// benchmarks, index sorting, and cache/NMP model sweeps.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <thread>

#include "ironman/engine.hpp"
#include "ironman/io.hpp"
#include "ironman/locality.hpp"
#include "ironman/log.hpp"
#include "ironman/nmp_model.hpp"
#include "ironman/params.hpp"

using namespace ironman;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitTransport = 3;

struct ParamsOpt {
    std::string preset;
    std::uint64_t n = 0, k = 0, t = 0, ell = 0;
    int d = 10;

    LpnParams resolve() const {
        if (!preset.empty()) {
            auto p = find_preset(preset);
            if (!p) throw CLI::ValidationError("--params", "unknown preset: " + preset);
            return *p;
        }
        if (n == 0 || k == 0) throw CLI::ValidationError("params", "need --params or --n/--k");
        return LpnParams{n, k, t, ell, d};
    }

    void attach(CLI::App* cmd, bool protocol_shape) {
        cmd->add_option("--params", preset, "parameter preset (p20..p24, toy, toy2)");
        cmd->add_option("--n", n, "output length");
        cmd->add_option("--k", k, "base vector length");
        if (protocol_shape) {
            cmd->add_option("--t", t, "tree count");
            cmd->add_option("--ell", ell, "leaves per tree");
        }
        cmd->add_option("--d", d, "row weight");
    }
};

Block block_seed(std::uint64_t v, std::uint64_t tag) { return Block{v, tag}; }

std::uint64_t parse_size(const std::string& s) {
    if (s.empty()) throw CLI::ValidationError("size", "empty size");
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    std::uint64_t mult = 1;
    if (pos < s.size()) {
        switch (std::toupper(s[pos])) {
            case 'K': mult = 1024; break;
            case 'M': mult = 1024 * 1024; break;
            case 'G': mult = 1024ull * 1024 * 1024; break;
            default: throw CLI::ValidationError("size", "bad size suffix: " + s);
        }
    }
    return static_cast<std::uint64_t>(v * static_cast<double>(mult));
}

std::ostream& open_out(std::ofstream& file, const std::string& path) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path);
    if (!file) throw io_error("cannot open output file: " + path);
    return file;
}

// ---------------------------------------------------------------------------
// gen

struct GenOptions {
    ParamsOpt params;
    bool loopback = false;
    std::string role;
    std::uint16_t listen_port = 0;
    bool has_listen = false;
    std::string connect;
    int m_ary = 4;
    std::string prg = "stream";
    std::uint64_t matrix_seed = 1;
    std::uint64_t dealer_seed = 2;
    std::uint64_t session_seed = 3;
    std::uint64_t delta_seed = 0;
    bool has_delta_seed = false;
    std::uint64_t reserve = 0;
    int iterations = 1;
    std::string out;
};

EngineConfig make_engine_config(const GenOptions& opt) {
    EngineConfig cfg;
    cfg.params = opt.params.resolve();
    cfg.fanout = opt.m_ary;
    if (opt.prg == "stream") {
        cfg.kind = PrgKind::stream();
    } else if (opt.prg == "fixedkey") {
        cfg.kind = PrgKind::fixed_key();
    } else {
        throw CLI::ValidationError("--prg", "must be stream or fixedkey");
    }
    cfg.matrix_seed = block_seed(opt.matrix_seed, 0x4D54);
    cfg.reserve_count = opt.reserve;
    cfg.check();
    return cfg;
}

Delta resolve_delta(const GenOptions& opt) {
    if (opt.has_delta_seed) {
        Block v = crhf(block_seed(opt.delta_seed, 0xDE17A), 0);
        if (v.is_zero()) v.lo = 1;
        return Delta(v);
    }
    std::random_device rd;
    Block v{(static_cast<std::uint64_t>(rd()) << 32) | rd(),
            (static_cast<std::uint64_t>(rd()) << 32) | rd()};
    if (v.is_zero()) v.lo = 1;
    return Delta(v);
}

json stats_to_json(const SessionStats& stats) {
    return json{{"schema", 1},
                {"emitted", stats.emitted},
                {"reserved", stats.reserved},
                {"prg_calls", stats.spcot_prg_calls},
                {"aux_prg_calls", stats.aux_prg_calls},
                {"base_consumed", stats.base_consumed},
                {"bytes_sent", stats.bytes_sent},
                {"wall_ms", stats.wall_ms}};
}

void accumulate(SessionStats& total, const SessionStats& one) {
    total.spcot_prg_calls += one.spcot_prg_calls;
    total.aux_prg_calls += one.aux_prg_calls;
    total.base_consumed += one.base_consumed;
    total.bytes_sent += one.bytes_sent;
    total.emitted += one.emitted;
    total.reserved = one.reserved;
    total.wall_ms += one.wall_ms;
}

int run_gen(const GenOptions& opt) {
    EngineConfig cfg = make_engine_config(opt);
    auto matrix = gen_matrix(cfg.matrix_seed, cfg.params);
    MatrixRef mref{&matrix, nullptr};
    Delta delta = resolve_delta(opt);
    const std::string out = opt.out.empty() ? "cot" : opt.out;

    if (opt.loopback) {
        auto pools = dealer_generate(cfg.reserve(), delta, block_seed(opt.dealer_seed, 0xD1));
        auto [se, re] = Endpoint::loopback_pair();
        Session ss(*se, cfg.session_id), rs(*re, cfg.session_id);
        SenderCotPool spool = std::move(pools.sender);
        ReceiverCotPool rpool = std::move(pools.receiver);

        SenderBatch all_sender{delta, {}};
        ReceiverBatch all_receiver;
        all_receiver.x = BitVec(0);
        SessionStats total{};
        for (int iter = 0; iter < opt.iterations; ++iter) {
            Block s_seed = crhf(block_seed(opt.session_seed, 0x51), static_cast<std::uint64_t>(iter));
            Block r_seed = crhf(block_seed(opt.session_seed, 0x52), static_cast<std::uint64_t>(iter));
            SessionStats s_stats{}, r_stats{};
            std::exception_ptr err;
            std::optional<SenderIteration> sent;
            std::thread sender([&] {
                try {
                    sent.emplace(extend_iteration_sender(ss, std::move(spool), cfg, mref, s_seed,
                                                         &s_stats));
                } catch (...) {
                    err = std::current_exception();
                }
            });
            auto received = extend_iteration_receiver(rs, std::move(rpool), cfg, mref, r_seed,
                                                      &r_stats);
            sender.join();
            if (err) std::rethrow_exception(err);

            spool = std::move(sent->next_pool);
            rpool = std::move(received.next_pool);
            all_sender.w.insert(all_sender.w.end(), sent->emitted.w.begin(), sent->emitted.w.end());
            BitVec merged(all_receiver.x.size() + received.emitted.x.size());
            for (std::size_t i = 0; i < all_receiver.x.size(); ++i)
                merged.set(i, all_receiver.x.get(i));
            for (std::size_t i = 0; i < received.emitted.x.size(); ++i)
                merged.set(all_receiver.x.size() + i, received.emitted.x.get(i));
            all_receiver.x = std::move(merged);
            all_receiver.y.insert(all_receiver.y.end(), received.emitted.y.begin(),
                                  received.emitted.y.end());
            accumulate(total, s_stats);
        }
        save_sender_dump(out + ".sender.cot", all_sender);
        save_receiver_dump(out + ".receiver.cot", all_receiver);
        std::cout << stats_to_json(total).dump(2) << "\n";
        return kExitOk;
    }

    if (opt.role != "sender" && opt.role != "receiver")
        throw CLI::ValidationError("--role", "need --role sender|receiver (or --loopback)");

    std::unique_ptr<Endpoint> ep;
    if (opt.has_listen) {
        TcpListener listener(opt.listen_port);
        log_info("listening on port " + std::to_string(listener.port()));
        ep = listener.accept();
    } else if (!opt.connect.empty()) {
        auto colon = opt.connect.rfind(':');
        if (colon == std::string::npos)
            throw CLI::ValidationError("--connect", "expected host:port");
        ep = Endpoint::tcp_connect(opt.connect.substr(0, colon),
                                   static_cast<std::uint16_t>(
                                       std::stoi(opt.connect.substr(colon + 1))),
                                   10000);
    } else {
        throw CLI::ValidationError("transport", "need --listen, --connect or --loopback");
    }

    // test-mode trusted dealer: both parties derive the shared pools from the
    // public dealer seed (the receiver therefore also sees delta; real base
    // OTs are out of scope)
    auto pools = dealer_generate(cfg.reserve(), delta, block_seed(opt.dealer_seed, 0xD1));
    Session session(*ep, cfg.session_id);
    SessionStats total{};
    if (opt.role == "sender") {
        SenderCotPool pool = std::move(pools.sender);
        SenderBatch all{delta, {}};
        for (int iter = 0; iter < opt.iterations; ++iter) {
            Block seed = crhf(block_seed(opt.session_seed, 0x51), static_cast<std::uint64_t>(iter));
            SessionStats stats{};
            auto res = extend_iteration_sender(session, std::move(pool), cfg, mref, seed, &stats);
            pool = std::move(res.next_pool);
            all.w.insert(all.w.end(), res.emitted.w.begin(), res.emitted.w.end());
            accumulate(total, stats);
        }
        save_sender_dump(out, all);
    } else {
        ReceiverCotPool pool = std::move(pools.receiver);
        ReceiverBatch all;
        all.x = BitVec(0);
        for (int iter = 0; iter < opt.iterations; ++iter) {
            Block seed = crhf(block_seed(opt.session_seed, 0x52), static_cast<std::uint64_t>(iter));
            SessionStats stats{};
            auto res = extend_iteration_receiver(session, std::move(pool), cfg, mref, seed, &stats);
            pool = std::move(res.next_pool);
            BitVec merged(all.x.size() + res.emitted.x.size());
            for (std::size_t i = 0; i < all.x.size(); ++i) merged.set(i, all.x.get(i));
            for (std::size_t i = 0; i < res.emitted.x.size(); ++i)
                merged.set(all.x.size() + i, res.emitted.x.get(i));
            all.x = std::move(merged);
            all.y.insert(all.y.end(), res.emitted.y.begin(), res.emitted.y.end());
            accumulate(total, stats);
        }
        save_receiver_dump(out, all);
    }
    std::cout << stats_to_json(total).dump(2) << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// verify

int run_verify(const std::string& sender_path, const std::string& receiver_path) {
    auto sender = load_sender_dump(sender_path);
    auto receiver = load_receiver_dump(receiver_path);
    auto rep = verify_batches(sender, receiver);
    std::cout << "total=" << rep.total << " valid=" << rep.valid << " first_invalid=";
    if (rep.first_invalid)
        std::cout << *rep.first_invalid;
    else
        std::cout << "none";
    std::cout << "\n";
    return rep.ok() ? kExitOk : kExitVerifyFailure;
}

// ---------------------------------------------------------------------------
// bench

int run_bench(const ParamsOpt& popt, std::uint64_t seed, const std::string& csv_path) {
    LpnParams params = popt.resolve();
    std::ofstream file;
    auto& out = open_out(file, csv_path);
    out << "params,m,prg,prg_calls,wall_ms\n";

    struct Config {
        int m;
        const char* prg;
    };
    const Config configs[] = {{2, "fixedkey"}, {4, "fixedkey"}, {2, "stream"}, {4, "stream"}};
    const std::string label = popt.preset.empty() ? "custom" : popt.preset;

    for (const auto& c : configs) {
        std::size_t ell = 1;
        while (ell < params.ell) ell *= static_cast<std::size_t>(c.m);
        int depth = 0;
        for (std::size_t l = 1; l < ell; l *= static_cast<std::size_t>(c.m)) ++depth;

        PrgCallCounter counter;
        auto t0 = std::chrono::steady_clock::now();
        for (std::size_t tree = 0; tree < params.t; ++tree) {
            Block tree_seed = crhf(block_seed(seed, 0xBE), tree);
            if (c.m == 4 && std::string(c.prg) == "fixedkey") {
                expand_four_key_tree(tree_seed, depth, &counter);
            } else {
                PrgKind kind =
                    std::string(c.prg) == "stream" ? PrgKind::stream() : PrgKind::fixed_key();
                expand_full_tree(tree_seed, c.m, depth, kind, static_cast<std::uint32_t>(tree),
                                 &counter);
            }
        }
        double wall =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                .count();
        out << label << "," << c.m << "," << c.prg << "," << counter.ops << "," << wall << "\n";
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// cache-sim

int run_cache_sim(const ParamsOpt& popt, std::uint64_t seed, const std::string& schedule,
                  const std::vector<std::string>& sizes, std::size_t window,
                  std::size_t line_bytes, const std::string& csv_path) {
    LpnParams params = popt.resolve();
    const std::string label = popt.preset.empty() ? "custom" : popt.preset;
    Block mseed = block_seed(seed, 0x4D54);

    std::ofstream file;
    auto& out = open_out(file, csv_path);
    out << "params,cache_bytes,schedule,accesses,hits,hit_rate\n";

    std::optional<SparseMatrix> matrix;  // materialized lazily for look-ahead
    std::optional<StreamingSwap> swap;

    for (const auto& size_str : sizes) {
        const std::uint64_t cap = parse_size(size_str);
        CacheConfig cfg{cap, line_bytes, 0, 16};
        CacheStats stats;
        if (schedule == "none" || schedule == "swap") {
            if (schedule == "swap" && !swap)
                swap = column_swap_streaming(mseed, params.n, params.k, params.d);
            CacheSim sim(cfg, params.k);
            MatrixRowStream rows(mseed, params.k, params.d);
            std::vector<std::uint32_t> row(static_cast<std::size_t>(params.d));
            for (std::size_t i = 0; i < params.n; ++i) {
                rows.next_row(row);
                for (auto c : row) sim.access(schedule == "swap" ? swap->old2new[c] : c);
            }
            stats = sim.stats();
        } else if (schedule == "swap+lookahead") {
            if (!matrix) {
                auto full = gen_matrix(mseed, params.n, params.k, params.d);
                auto swapped = column_swap(full);
                matrix = std::move(swapped.relabeled);
            }
            auto sorted = row_lookahead(*matrix, window, cfg);
            stats = simulate_cache(sorted, cfg);
        } else {
            throw CLI::ValidationError("--schedule", "must be none, swap or swap+lookahead");
        }
        out << label << "," << cap << "," << schedule << "," << stats.accesses << "," << stats.hits
            << "," << stats.hit_rate() << "\n";
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// nmp-sim

int run_nmp_sim(const ParamsOpt& popt, std::uint64_t seed, std::vector<unsigned> ranks_list,
                const std::string& cache_size, int m_ary, const std::string& prg,
                const std::string& csv_path) {
    LpnParams params = popt.resolve();
    const std::string label = popt.preset.empty() ? "custom" : popt.preset;
    Block mseed = block_seed(seed, 0x4D54);
    CacheConfig cache{parse_size(cache_size), 64, 0, 16};
    NmpConfig cfg;

    PrgFamily family = prg == "fixedkey" ? PrgFamily::FixedKey : PrgFamily::Stream;
    std::size_t ell = 1;
    while (ell < params.ell) ell *= static_cast<std::size_t>(m_ary);
    auto spcot = estimate_spcot_cycles(params.t, ell, m_ary, family, cfg);

    auto swap = column_swap_streaming(mseed, params.n, params.k, params.d);

    std::ofstream file;
    auto& out = open_out(file, csv_path);
    out << "params,ranks,cache_bytes,spcot_cycles,lpn_cycles,total_cycles,total_ms\n";

    for (unsigned ranks : ranks_list) {
        auto parts = partition_rows(params.n, ranks);
        std::vector<std::uint64_t> per_rank;
        CacheSim sim(cache, params.k);
        MatrixRowStream rows(mseed, params.k, params.d);
        std::vector<std::uint32_t> row(static_cast<std::size_t>(params.d));
        std::size_t part = 0;
        for (std::size_t i = 0; i < params.n; ++i) {
            if (i == parts[part].second) {
                per_rank.push_back(estimate_lpn_cycles(sim.stats(), cfg));
                sim.reset();
                ++part;
            }
            rows.next_row(row);
            for (auto c : row) sim.access(swap.old2new[c]);
        }
        per_rank.push_back(estimate_lpn_cycles(sim.stats(), cfg));

        auto report = total_latency(spcot.cycles, per_rank, params.n, params.k, cfg);
        out << label << "," << ranks << "," << cache.capacity_bytes << "," << report.spcot_cycles
            << "," << report.lpn_cycles << "," << report.total_cycles << "," << report.total_ms
            << "\n";
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// sort

int run_sort(const ParamsOpt& popt, std::uint64_t seed, std::size_t window,
             const std::string& cache_size, const std::string& out_path,
             const std::string& matrix_out) {
    LpnParams params = popt.resolve();
    Block mseed = block_seed(seed, 0x4D54);
    auto matrix = gen_matrix(mseed, params.n, params.k, params.d);
    if (!matrix_out.empty()) save_matrix(matrix_out, matrix);
    CacheConfig cfg{parse_size(cache_size), 64, 0, 16};
    auto sorted = sort_matrix(matrix, window, cfg);
    save_sorted(out_path, sorted, cfg);
    auto stats = simulate_cache(sorted, cfg);
    log_info("sorted schedule hit rate: " + std::to_string(stats.hit_rate()));
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"PCG-style OT extension engine with cache-locality and near-memory models"};
    app.require_subcommand(1);

    // gen
    GenOptions gen;
    auto* cmd_gen = app.add_subcommand("gen", "run the extension protocol and dump correlations");
    gen.params.attach(cmd_gen, true);
    cmd_gen->add_flag("--loopback", gen.loopback, "run both roles in-process");
    cmd_gen->add_option("--role", gen.role, "sender or receiver");
    auto* listen_opt = cmd_gen->add_option("--listen", gen.listen_port, "listen on a TCP port");
    cmd_gen->add_option("--connect", gen.connect, "connect to host:port");
    cmd_gen->add_option("--m-ary", gen.m_ary, "tree fanout (2 or 4)")->default_val(4);
    cmd_gen->add_option("--prg", gen.prg, "stream or fixedkey")->default_val("stream");
    cmd_gen->add_option("--matrix-seed", gen.matrix_seed, "public matrix seed");
    cmd_gen->add_option("--dealer-seed", gen.dealer_seed, "test-dealer seed");
    cmd_gen->add_option("--session-seed", gen.session_seed, "session seed");
    auto* delta_opt = cmd_gen->add_option("--delta-seed", gen.delta_seed,
                                          "derive delta from this seed");
    cmd_gen->add_option("--reserve", gen.reserve, "bootstrap reservation override");
    cmd_gen->add_option("--iterations", gen.iterations, "chained iterations")->default_val(1);
    cmd_gen->add_option("--out", gen.out, "dump path (loopback appends .sender/.receiver)");

    // verify
    std::string verify_sender, verify_receiver;
    auto* cmd_verify = app.add_subcommand("verify", "check a pair of correlation dumps");
    cmd_verify->add_option("--sender", verify_sender, "sender dump")->required();
    cmd_verify->add_option("--receiver", verify_receiver, "receiver dump")->required();

    // bench
    ParamsOpt bench_params;
    std::uint64_t bench_seed = 7;
    std::string bench_csv;
    auto* cmd_bench = app.add_subcommand("bench", "count expansion operations per configuration");
    bench_params.attach(cmd_bench, true);
    cmd_bench->add_option("--seed", bench_seed, "expansion seed");
    cmd_bench->add_option("--csv", bench_csv, "CSV output path (default stdout)");

    // cache-sim
    ParamsOpt cache_params;
    std::uint64_t cache_seed = 1;
    std::string cache_schedule = "swap";
    std::vector<std::string> cache_sizes{"32K", "64K", "128K", "256K", "512K", "1M", "2M"};
    std::size_t cache_window = 64;
    std::size_t cache_line = 64;
    std::string cache_csv;
    auto* cmd_cache = app.add_subcommand("cache-sim", "memory-side cache hit-rate sweeps");
    cache_params.attach(cmd_cache, false);
    cmd_cache->add_option("--matrix-seed", cache_seed, "public matrix seed");
    cmd_cache->add_option("--schedule", cache_schedule, "none, swap or swap+lookahead");
    cmd_cache->add_option("--cache", cache_sizes, "cache sizes, e.g. 32K 1M");
    cmd_cache->add_option("--window", cache_window, "look-ahead window rows");
    cmd_cache->add_option("--line", cache_line, "cache line bytes");
    cmd_cache->add_option("--csv", cache_csv, "CSV output path (default stdout)");

    // nmp-sim
    ParamsOpt nmp_params;
    std::uint64_t nmp_seed = 1;
    std::vector<unsigned> nmp_ranks{2, 4, 8, 16};
    std::string nmp_cache = "256K";
    int nmp_m = 4;
    std::string nmp_prg = "stream";
    std::string nmp_csv;
    auto* cmd_nmp = app.add_subcommand("nmp-sim", "near-memory latency model sweeps");
    nmp_params.attach(cmd_nmp, true);
    cmd_nmp->add_option("--matrix-seed", nmp_seed, "public matrix seed");
    cmd_nmp->add_option("--ranks", nmp_ranks, "rank counts to sweep");
    cmd_nmp->add_option("--cache", nmp_cache, "memory-side cache size");
    cmd_nmp->add_option("--m-ary", nmp_m, "tree fanout for the SPCOT estimate");
    cmd_nmp->add_option("--prg", nmp_prg, "stream or fixedkey");
    cmd_nmp->add_option("--csv", nmp_csv, "CSV output path (default stdout)");

    // sort
    ParamsOpt sort_params;
    std::uint64_t sort_seed = 1;
    std::size_t sort_window = 64;
    std::string sort_cache = "1M";
    std::string sort_out = "sorted.irns";
    std::string sort_matrix_out;
    auto* cmd_sort = app.add_subcommand("sort", "write a locality-sorted schedule file");
    sort_params.attach(cmd_sort, false);
    cmd_sort->add_option("--matrix-seed", sort_seed, "public matrix seed");
    cmd_sort->add_option("--window", sort_window, "look-ahead window rows");
    cmd_sort->add_option("--cache", sort_cache, "cache size driving the sort");
    cmd_sort->add_option("--out", sort_out, "output schedule file");
    cmd_sort->add_option("--save-matrix", sort_matrix_out, "also cache the raw matrix");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }
    gen.has_listen = listen_opt->count() > 0;
    gen.has_delta_seed = delta_opt->count() > 0;

    try {
        if (cmd_gen->parsed()) return run_gen(gen);
        if (cmd_verify->parsed()) return run_verify(verify_sender, verify_receiver);
        if (cmd_bench->parsed()) return run_bench(bench_params, bench_seed, bench_csv);
        if (cmd_cache->parsed())
            return run_cache_sim(cache_params, cache_seed, cache_schedule, cache_sizes,
                                 cache_window, cache_line, cache_csv);
        if (cmd_nmp->parsed())
            return run_nmp_sim(nmp_params, nmp_seed, nmp_ranks, nmp_cache, nmp_m, nmp_prg, nmp_csv);
        if (cmd_sort->parsed())
            return run_sort(sort_params, sort_seed, sort_window, sort_cache, sort_out,
                            sort_matrix_out);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const transport_error& e) {
        std::cerr << "transport error: " << e.what() << "\n";
        return kExitTransport;
    } catch (const protocol_error& e) {
        std::cerr << "protocol error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const config_error& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const io_error& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
