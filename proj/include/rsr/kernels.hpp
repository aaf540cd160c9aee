// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rsr/indexer.hpp"
#include "rsr/variant.hpp"

namespace rsr {

/// Counts the scalar additions (or multiply-accumulates) a kernel performs.
struct OpCounter {
  std::uint64_t additions = 0;
};

/// Per-bucket sums of an input vector for one block.
struct SegmentedSums {
  std::uint32_t width = 0;
  std::vector<double> sums; // length 2^width
};

/// The implicit 2^width x width matrix whose row j is the binary expansion of j,
/// column 0 being the most significant bit.
struct BinPattern {
  std::uint32_t width = 0;

  std::size_t rows() const noexcept { return std::size_t{1} << width; }
  std::size_t cols() const noexcept { return width; }
  bool operator()(std::size_t row, std::size_t col) const noexcept {
    return (row >> (width - 1 - col)) & 1U;
  }
};

/// Bit `col` of Bin_[width] row `row`. Throws ArgumentError when out of range.
bool bin_pattern_bit(std::uint32_t width, std::size_t row, std::size_t col);

/// sums[j] = sum of v[permutation[p]] over p in bucket j, in ascending p.
SegmentedSums segmented_sum(std::span<const double> v, const BlockIndex& block);
void segmented_sum(std::span<const double> v, const BlockIndex& block, std::span<double> sums);
void segmented_sum(std::span<const double> v, const BlockIndex& block, std::span<double> sums,
                   OpCounter& counter);

/// Dense product u * Bin_[width]; width * 2^width multiply-accumulates.
std::vector<double> block_product_rsr(const SegmentedSums& u);
void block_product_rsr(std::span<const double> u, std::span<double> out);
void block_product_rsr(std::span<const double> u, std::span<double> out, OpCounter& counter);

/// The same product by repeated odd-position sums and pairwise folding, fewer than 2 * 2^width additions.
std::vector<double> block_product_rsrpp(const SegmentedSums& u);
void block_product_rsrpp(std::span<const double> u, std::span<double> out);
void block_product_rsrpp(std::span<const double> u, std::span<double> out, OpCounter& counter);
/// Overwrites `u` with intermediate folds.
void block_product_rsrpp_inplace(std::span<double> u, std::span<double> out);

/// v * B from the index of B.
std::vector<double> multiply_rsr(std::span<const double> v, const RsrIndex& index, Variant variant);
std::vector<double> multiply_rsr(std::span<const double> v, const RsrIndex& index, Variant variant,
                                 OpCounter& counter);

/// v * A = v * positive - v * negative.
std::vector<double> multiply_ternary(std::span<const double> v, const TernaryIndex& index, Variant variant);

/// Blocks are split into contiguous ranges, one per worker, each writing its
/// own slice of the output. Bitwise identical to the single-worker result.
std::vector<double> multiply_parallel(std::span<const double> v, const RsrIndex& index, Variant variant,
                                      std::size_t workers);
std::vector<double> multiply_parallel(std::span<const double> v, const TernaryIndex& index, Variant variant,
                                      std::size_t workers);

} // namespace rsr
