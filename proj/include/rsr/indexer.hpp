// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rsr/matrix.hpp"

namespace rsr {

/// Largest supported block width.
inline constexpr std::size_t kMaxBlockWidth = 30;

/// A run of consecutive columns `[start, start + width)`.
struct ColumnBlock {
  std::size_t start = 0;
  std::size_t width = 0;

  friend bool operator==(const ColumnBlock&, const ColumnBlock&) = default;
};

/// Preprocessed form of one column block.
///
/// `permutation[p]` is the original row placed at sorted position p. Rows are
/// ordered by bucket value and, within a bucket, by original index.
/// `segmentation[j]` counts the rows whose bucket value is below j, so bucket j
/// occupies sorted positions `[segmentation[j], segment_end(j))`.
struct BlockIndex {
  std::uint32_t width = 0;
  std::vector<std::uint32_t> permutation;
  std::vector<std::uint32_t> segmentation;

  std::size_t segment_count() const noexcept { return segmentation.size(); }
  std::size_t segment_end(std::size_t j) const noexcept {
    return j + 1 < segmentation.size() ? segmentation[j + 1] : permutation.size();
  }

  friend bool operator==(const BlockIndex&, const BlockIndex&) = default;
};

/// Preprocessed binary matrix: one BlockIndex per column block of nominal width k.
struct RsrIndex {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t k = 1;
  std::vector<BlockIndex> blocks;

  friend bool operator==(const RsrIndex&, const RsrIndex&) = default;
};

/// Indices of the positive and negative halves of a ternary matrix.
struct TernaryIndex {
  RsrIndex positive;
  RsrIndex negative;

  std::size_t rows() const noexcept { return positive.rows; }
  std::size_t cols() const noexcept { return positive.cols; }
  std::size_t k() const noexcept { return positive.k; }

  friend bool operator==(const TernaryIndex&, const TernaryIndex&) = default;
};

/// min(30, max(1, floor(log2(rows)))).
std::size_t max_block_width(std::size_t rows) noexcept;

/// Partition of `cols` columns into blocks of width k; the last block may be narrower.
std::vector<ColumnBlock> column_blocks(std::size_t cols, std::size_t k);

/// Row bits of `b` in `[start, start + width)` read MSB-first as an integer.
std::uint32_t bucket_value(const BinaryMatrix& b, std::size_t row, std::size_t start, std::size_t width);

/// Stable order of the rows by ascending bucket value.
std::vector<std::uint32_t> binary_row_order(const BinaryMatrix& b, ColumnBlock block);

/// Cumulative bucket counts (length 2^width) for rows already in binary row order.
/// Throws ArgumentError if `permutation` is not that order.
std::vector<std::uint32_t> full_segmentation(const BinaryMatrix& b, ColumnBlock block,
                                             std::span<const std::uint32_t> permutation);

/// Builds the index of `b`. Blocks are split across `workers` threads; the
/// result does not depend on the worker count.
RsrIndex preprocess(const BinaryMatrix& b, std::size_t k, std::size_t workers = 1);

TernaryIndex preprocess_ternary(const TernaryMatrix& a, std::size_t k, std::size_t workers = 1);

/// Inverse of preprocess. Validates the index first.
BinaryMatrix reconstruct_matrix(const RsrIndex& index);

/// Checks every structural invariant, throwing IndexError on the first violation.
void validate(const RsrIndex& index);
void validate(const TernaryIndex& index);

} // namespace rsr
