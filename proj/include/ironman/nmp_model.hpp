#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "ironman/ggm.hpp"
#include "ironman/locality.hpp"

namespace ironman {

struct NmpConfig {
    unsigned ranks = 16;
    double memory_clock_mhz = 1200.0;
    std::uint64_t t_hit = 2;
    std::uint64_t t_rcd = 16;
    std::uint64_t t_cl = 16;
    std::uint64_t t_bl = 4;
    unsigned chacha_cores_per_dimm = 4;
    int pipeline_depth = 8;

    void validate() const;
    std::uint64_t miss_cycles() const { return t_rcd + t_cl + t_bl; }
};

/// Contiguous, disjoint row ranges covering [0,n); sizes differ by at most 1.
std::vector<std::pair<std::size_t, std::size_t>> partition_rows(std::size_t n, unsigned ranks);

/// cycles = hits*t_hit + misses*(t_rcd + t_cl + t_bl) + accesses (index streaming)
std::uint64_t estimate_lpn_cycles(const CacheStats& stats, const NmpConfig& cfg);

struct SpcotCycleEstimate {
    std::uint64_t total_calls = 0;
    double utilization = 1.0;
    std::uint64_t call_cycles = 0;  ///< ceil(total_calls / cores) / utilization
    std::uint64_t cycles = 0;       ///< call_cycles + pipeline fill
};

SpcotCycleEstimate estimate_spcot_cycles(std::size_t trees, std::size_t ell, int fanout,
                                         PrgFamily family, const NmpConfig& cfg);

struct NmpReport {
    std::vector<std::uint64_t> per_rank_cycles;
    std::uint64_t lpn_cycles = 0;    ///< max over ranks
    std::uint64_t spcot_cycles = 0;
    std::uint64_t reduce_cycles = 0; ///< n-output XOR merge at the DIMM
    std::uint64_t total_cycles = 0;  ///< max(spcot, lpn) + reduce
    double total_ms = 0.0;
    double broadcast_ms = 0.0;       ///< one-time k-vector broadcast, excluded from totals
};

NmpReport total_latency(std::uint64_t spcot_cycles, std::span<const std::uint64_t> per_rank_lpn,
                        std::size_t n, std::size_t k, const NmpConfig& cfg);

}  // namespace ironman
