#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ironman/lpn.hpp"

namespace ironman {

struct CacheConfig {
    std::size_t capacity_bytes = 1 << 20;
    std::size_t line_bytes = 64;
    unsigned ways = 0;  ///< 0 = fully associative; otherwise s-way set associative
    std::size_t element_bytes = 16;

    void validate() const;
    std::size_t lines() const { return capacity_bytes / line_bytes; }
    std::size_t elements_per_line() const { return line_bytes / element_bytes; }
};

struct CacheStats {
    std::uint64_t accesses = 0;
    std::uint64_t hits = 0;
    std::uint64_t misses = 0;
    double hit_rate() const { return accesses == 0 ? 0.0 : static_cast<double>(hits) / accesses; }
};

/// LRU cache simulator over element indices of a k-length vector of Blocks.
/// Element address = index * element_bytes; line id = address / line_bytes.
/// Line ids are dense, so residency and recency live in flat arrays. The
/// access path is header-inline: sweeps feed it hundreds of millions of
/// indices.
class CacheSim {
public:
    CacheSim(const CacheConfig& cfg, std::size_t k_elements);

    /// Returns true on hit. Updates LRU state and counters.
    bool access(std::uint32_t element_index) {
        std::uint32_t line = static_cast<std::uint32_t>(element_index / elems_per_line_);
        bool hit = ways_ == 0 ? access_full_assoc(line) : access_set_assoc(line);
        ++stats_.accesses;
        if (hit)
            ++stats_.hits;
        else
            ++stats_.misses;
        return hit;
    }

    bool line_resident(std::uint32_t element_index) const {
        std::uint32_t line = static_cast<std::uint32_t>(element_index / elems_per_line_);
        if (ways_ == 0) return present_[line] != 0;
        const std::uint32_t* set = set_lines_.data() + (line % num_sets_) * ways_;
        for (unsigned w = 0; w < ways_; ++w)
            if (set[w] == line) return true;
        return false;
    }

    const CacheStats& stats() const { return stats_; }
    void reset_stats() { stats_ = CacheStats{}; }
    void reset();

private:
    bool access_full_assoc(std::uint32_t line) {
        const std::uint32_t sentinel = line_count_;
        if (present_[line]) {
            if (head_ != line) {
                std::uint32_t p = prev_[line], nx = next_[line];
                if (p != sentinel) next_[p] = nx;
                if (nx != sentinel)
                    prev_[nx] = p;
                else
                    tail_ = p;
                prev_[line] = sentinel;
                next_[line] = head_;
                prev_[head_] = line;
                head_ = line;
            }
            return true;
        }
        if (resident_ == capacity_lines_) {
            std::uint32_t victim = tail_;
            tail_ = prev_[victim];
            if (tail_ != sentinel)
                next_[tail_] = sentinel;
            else
                head_ = sentinel;
            present_[victim] = 0;
            --resident_;
        }
        present_[line] = 1;
        prev_[line] = sentinel;
        next_[line] = head_;
        if (head_ != sentinel) prev_[head_] = line;
        head_ = line;
        if (tail_ == sentinel) tail_ = line;
        ++resident_;
        return false;
    }

    bool access_set_assoc(std::uint32_t line) {
        std::uint32_t* set = set_lines_.data() + (line % num_sets_) * ways_;
        for (unsigned w = 0; w < ways_; ++w) {
            if (set[w] == line) {
                for (unsigned v = w; v > 0; --v) set[v] = set[v - 1];
                set[0] = line;
                return true;
            }
        }
        for (unsigned v = ways_ - 1; v > 0; --v) set[v] = set[v - 1];
        set[0] = line;
        return false;
    }

    std::size_t elems_per_line_ = 4;
    unsigned ways_ = 0;
    std::size_t capacity_lines_ = 0;
    CacheStats stats_;

    // fully associative: intrusive LRU list over dense line ids
    std::vector<std::uint32_t> prev_, next_;
    std::vector<std::uint8_t> present_;
    std::uint32_t head_ = 0, tail_ = 0;  // head = MRU, tail = LRU; sentinel = line_count_
    std::size_t resident_ = 0;
    std::uint32_t line_count_ = 0;

    // set associative: per-set way arrays, MRU first
    std::vector<std::uint32_t> set_lines_;  // sets * ways, UINT32_MAX = empty
    std::size_t num_sets_ = 0;
};

/// Simulates every capacity of an ascending ladder in one pass by exploiting
/// LRU inclusion: all capacities share one recency stack; per-capacity
/// membership is tracked with boundary markers. Exactly equivalent to running
/// an independent fully-associative CacheSim per capacity.
class MultiCapacityLru {
public:
    MultiCapacityLru(std::span<const std::size_t> capacities_bytes, std::size_t line_bytes,
                     std::size_t element_bytes, std::size_t k_elements);

    void access(std::uint32_t element_index) {
        const auto line = static_cast<std::uint32_t>(element_index / elems_per_line_);
        ++accesses_;
        const std::uint8_t c = cls_[line];
        if (c != kAbsent) {
            ++hist_[c];
            if (head_ != line) {
                move_to_front(line, c);
            }
            return;
        }
        insert_front(line);
    }

    std::vector<CacheStats> stats() const;

private:
    static constexpr std::uint8_t kAbsent = 0xFF;

    void move_to_front(std::uint32_t line, std::uint8_t c);
    void insert_front(std::uint32_t line);

    std::size_t elems_per_line_ = 4;
    std::uint32_t line_count_ = 0;  // doubles as the list sentinel
    std::size_t nc_ = 0;
    std::vector<std::size_t> caps_;     // capacities in lines, ascending
    std::vector<std::uint32_t> bound_;  // node at position caps_[i] while full
    std::vector<std::size_t> filled_;   // min(resident, caps_[i])
    std::vector<std::uint32_t> prev_, next_;
    std::vector<std::uint8_t> cls_;  // smallest capacity index holding the line
    std::uint32_t head_ = 0, tail_ = 0;
    std::size_t resident_ = 0;
    std::uint64_t accesses_ = 0;
    std::vector<std::uint64_t> hist_;  // hits by class
};

struct ColumnSwapResult {
    std::vector<std::uint32_t> perm;  ///< new position -> original column
    SparseMatrix relabeled;           ///< entries rewritten to new positions
};

/// Orders columns by first occurrence in a row-major scan; unreferenced
/// columns keep ascending original order at the back.
ColumnSwapResult column_swap(const SparseMatrix& a);

/// The same permutation computed from the deterministic row stream without
/// materializing the matrix. old2new[original column] = swapped position.
struct StreamingSwap {
    std::vector<std::uint32_t> perm;
    std::vector<std::uint32_t> old2new;
};
StreamingSwap column_swap_streaming(Block matrix_seed, std::size_t n, std::size_t k, int d);

/// Row look-ahead schedule over a (relabeled) matrix: rows are scanned in
/// order with a window of pending rows; a pending entry whose line is
/// resident in the simulated cache is emitted immediately, the rest follow
/// row-major. Sorting runs independently per block of kSortBlockRows rows.
SortedCsr row_lookahead(const SparseMatrix& relabeled, std::size_t window_rows,
                        const CacheConfig& cfg);

/// column_swap followed by row_lookahead, with the permutation attached.
SortedCsr sort_matrix(const SparseMatrix& a, std::size_t window_rows, const CacheConfig& cfg);

/// Row-major CSR of a matrix as a trivial schedule (identity permutation).
SortedCsr row_major_schedule(const SparseMatrix& a);

CacheStats simulate_cache(const SortedCsr& schedule, const CacheConfig& cfg);
CacheStats simulate_cache(const SparseMatrix& row_major, const CacheConfig& cfg);

constexpr std::size_t kSortBlockRows = std::size_t{1} << 16;

}  // namespace ironman
