// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <variant>
#include <vector>

#include "rsr/indexer.hpp"

namespace rsr {

// .rsx layout, all integers little-endian:
//
//   header   "RSX1" | u16 version | u8 kind | u64 rows | u64 cols | u16 k | u32 block_count
//   block    u16 width | u32 permutation[rows] | u32 segmentation[2^width]
//
// Blocks follow in column order. A ternary file holds all positive-half
// blocks, then all negative-half blocks; block_count is per half.

enum class IndexKind : std::uint8_t { binary = 1, ternary = 2 };

struct IndexFileHeader {
  static constexpr std::size_t kSize = 29;
  static constexpr std::uint16_t kVersion = 1;

  std::uint16_t version = kVersion;
  IndexKind kind = IndexKind::binary;
  std::uint64_t rows = 0;
  std::uint64_t cols = 0;
  std::uint16_t k = 0;
  std::uint32_t block_count = 0;
};

using StoredIndex = std::variant<RsrIndex, TernaryIndex>;

std::vector<std::uint8_t> serialize(const RsrIndex& index);
std::vector<std::uint8_t> serialize(const TernaryIndex& index);

/// Parses and validates; throws FormatError for a malformed file and IndexError for a violated invariant.
StoredIndex deserialize(std::span<const std::uint8_t> bytes);
IndexFileHeader read_header(std::span<const std::uint8_t> bytes);

void save_index(const RsrIndex& index, const std::filesystem::path& path);
void save_index(const TernaryIndex& index, const std::filesystem::path& path);
StoredIndex load_index(const std::filesystem::path& path);

/// Exact .rsx size in bytes.
std::uint64_t serialized_size(const RsrIndex& index);
std::uint64_t serialized_size(const TernaryIndex& index);

/// Index footprint against the dense matrix. `entry_ratio` compares stored
/// integers with matrix entries; `byte_ratio` compares the .rsx size with one
/// byte per dense entry.
struct SpaceReport {
  std::uint64_t index_entries = 0;
  std::uint64_t dense_entries = 0;
  double entry_ratio = 0.0;
  std::uint64_t serialized_bytes = 0;
  std::uint64_t dense_bytes_1B = 0;
  double byte_ratio = 0.0;
};

SpaceReport space_report(const RsrIndex& index);
/// Counts both halves against the one ternary matrix.
SpaceReport space_report(const TernaryIndex& index);

} // namespace rsr
