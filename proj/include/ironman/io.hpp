#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>

#include "ironman/base_cot.hpp"
#include "ironman/locality.hpp"
#include "ironman/lpn.hpp"

namespace ironman {

struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Correlation dumps ("IRNC"): role u8, count u64, sender carries delta, the
// receiver a packed bit vector; blocks follow, all little-endian.
void save_sender_dump(const std::filesystem::path& path, const SenderBatch& batch);
void save_receiver_dump(const std::filesystem::path& path, const ReceiverBatch& batch);
SenderBatch load_sender_dump(const std::filesystem::path& path);
ReceiverBatch load_receiver_dump(const std::filesystem::path& path);

struct VerifyReport {
    std::uint64_t total = 0;
    std::uint64_t valid = 0;
    std::optional<std::size_t> first_invalid;
    bool ok() const { return total == valid; }
};
VerifyReport verify_batches(const SenderBatch& sender, const ReceiverBatch& receiver);

// Dealer pools ("IRNB"): sender file holds delta + blocks, receiver file a
// packed bit vector + blocks.
void save_dealer_sender(const std::filesystem::path& path, const SenderCotPool& pool);
void save_dealer_receiver(const std::filesystem::path& path, const ReceiverCotPool& pool);
SenderCotPool load_dealer_sender(const std::filesystem::path& path);
ReceiverCotPool load_dealer_receiver(const std::filesystem::path& path);

// Matrix cache ("IRNA").
void save_matrix(const std::filesystem::path& path, const SparseMatrix& a);
SparseMatrix load_matrix(const std::filesystem::path& path);

// Sorted schedule ("IRNS"), with the cache config that drove the sort.
void save_sorted(const std::filesystem::path& path, const SortedCsr& s, const CacheConfig& cfg);
std::pair<SortedCsr, CacheConfig> load_sorted(const std::filesystem::path& path);

}  // namespace ironman
