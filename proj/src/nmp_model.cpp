#include "ironman/nmp_model.hpp"

#include <cmath>
#include <stdexcept>

namespace ironman {

void NmpConfig::validate() const {
    if (ranks < 1) throw config_error("NmpConfig: ranks must be >= 1");
    if (t_hit < 1 || t_rcd < 1 || t_cl < 1 || t_bl < 1)
        throw config_error("NmpConfig: timing constants must be >= 1");
    if (chacha_cores_per_dimm < 1) throw config_error("NmpConfig: cores must be >= 1");
    if (pipeline_depth < 1) throw config_error("NmpConfig: pipeline depth must be >= 1");
    if (memory_clock_mhz <= 0) throw config_error("NmpConfig: clock must be positive");
}

std::vector<std::pair<std::size_t, std::size_t>> partition_rows(std::size_t n, unsigned ranks) {
    if (ranks == 0 || ranks > n) throw std::invalid_argument("partition_rows: need 1 <= ranks <= n");
    std::vector<std::pair<std::size_t, std::size_t>> ranges;
    ranges.reserve(ranks);
    const std::size_t base = n / ranks, extra = n % ranks;
    std::size_t start = 0;
    for (unsigned r = 0; r < ranks; ++r) {
        std::size_t len = base + (r < extra ? 1 : 0);
        ranges.emplace_back(start, start + len);
        start += len;
    }
    return ranges;
}

std::uint64_t estimate_lpn_cycles(const CacheStats& stats, const NmpConfig& cfg) {
    return stats.hits * cfg.t_hit + stats.misses * cfg.miss_cycles() + stats.accesses;
}

SpcotCycleEstimate estimate_spcot_cycles(std::size_t trees, std::size_t ell, int fanout,
                                         PrgFamily family, const NmpConfig& cfg) {
    cfg.validate();
    SpcotCycleEstimate est;
    est.total_calls = static_cast<std::uint64_t>(trees) * prg_call_count(family, fanout, ell);

    int depth = 0;
    for (std::size_t l = 1; l < ell; l *= static_cast<std::size_t>(fanout)) ++depth;
    std::vector<TreeShape> shapes(trees, TreeShape{fanout, depth});
    est.utilization = schedule_utilization(shapes, cfg.pipeline_depth);

    const std::uint64_t per_core =
        (est.total_calls + cfg.chacha_cores_per_dimm - 1) / cfg.chacha_cores_per_dimm;
    est.call_cycles =
        static_cast<std::uint64_t>(std::ceil(static_cast<double>(per_core) / est.utilization));
    est.cycles = est.call_cycles + static_cast<std::uint64_t>(cfg.pipeline_depth);
    return est;
}

NmpReport total_latency(std::uint64_t spcot_cycles, std::span<const std::uint64_t> per_rank_lpn,
                        std::size_t n, std::size_t k, const NmpConfig& cfg) {
    cfg.validate();
    NmpReport rep;
    rep.per_rank_cycles.assign(per_rank_lpn.begin(), per_rank_lpn.end());
    for (auto c : per_rank_lpn) rep.lpn_cycles = std::max(rep.lpn_cycles, c);
    rep.spcot_cycles = spcot_cycles;
    rep.reduce_cycles = n;  // one merge cycle per output at the DIMM
    rep.total_cycles = std::max(rep.spcot_cycles, rep.lpn_cycles) + rep.reduce_cycles;
    rep.total_ms = static_cast<double>(rep.total_cycles) / (cfg.memory_clock_mhz * 1e3);
    // one-time broadcast of the k-length vector, 8 bytes per cycle per rank
    rep.broadcast_ms =
        static_cast<double>(k) * 16.0 / 8.0 / (cfg.memory_clock_mhz * 1e3);
    return rep;
}

}  // namespace ironman
