// SPDX-License-Identifier: Apache-2.0
#include "rsr/indexer.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <string>

#include "rsr/error.hpp"
#include "rsr/parallel.hpp"

namespace rsr {

namespace {

// Up to 30 bits starting at column `start` of a packed row; spans at most 5 bytes.
inline std::uint32_t extract_bits(const std::uint8_t* row, std::size_t start, std::size_t width) noexcept {
  const std::size_t first = start / 8;
  const std::size_t last = (start + width - 1) / 8;
  std::uint64_t window = 0;
  for (std::size_t b = first; b <= last; ++b) window = (window << 8) | row[b];
  const std::size_t shift = (last - first + 1) * 8 - start % 8 - width;
  return static_cast<std::uint32_t>((window >> shift) & ((std::uint64_t{1} << width) - 1));
}

void check_block(const BinaryMatrix& b, ColumnBlock block) {
  if (block.width < 1 || block.width > kMaxBlockWidth)
    throw ArgumentError("block width " + std::to_string(block.width) + " outside [1, 30]");
  if (block.start > b.cols() || block.width > b.cols() - block.start)
    throw ArgumentError("block [" + std::to_string(block.start) + ", " + std::to_string(block.start + block.width) +
                        ") exceeds " + std::to_string(b.cols()) + " columns");
}

void check_rows(std::size_t rows) {
  if (rows > std::numeric_limits<std::uint32_t>::max())
    throw ArgumentError("matrix has too many rows for 32-bit row indices");
}

// Counting sort of the rows by bucket value; stable in the original row index.
BlockIndex build_block(const BinaryMatrix& b, ColumnBlock block, std::vector<std::uint32_t>& buckets) {
  const std::size_t rows = b.rows();
  const std::size_t segments = std::size_t{1} << block.width;

  BlockIndex out;
  out.width = static_cast<std::uint32_t>(block.width);
  out.segmentation.assign(segments, 0);
  out.permutation.resize(rows);

  buckets.resize(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    const std::uint32_t value = extract_bits(b.row_data(r).data(), block.start, block.width);
    buckets[r] = value;
    if (value + 1 < segments) ++out.segmentation[value + 1];
  }
  for (std::size_t j = 1; j < segments; ++j) out.segmentation[j] += out.segmentation[j - 1];

  std::vector<std::uint32_t> next(out.segmentation);
  for (std::size_t r = 0; r < rows; ++r) out.permutation[next[buckets[r]]++] = static_cast<std::uint32_t>(r);
  return out;
}

[[noreturn]] void invalid(const std::string& what) { throw IndexError("invalid index: " + what); }

} // namespace

std::size_t max_block_width(std::size_t rows) noexcept {
  if (rows <= 1) return 1;
  const auto floor_log2 = static_cast<std::size_t>(std::bit_width(rows) - 1);
  return std::min(kMaxBlockWidth, std::max<std::size_t>(1, floor_log2));
}

std::vector<ColumnBlock> column_blocks(std::size_t cols, std::size_t k) {
  if (k == 0) throw ArgumentError("block width k must be at least 1");
  std::vector<ColumnBlock> blocks;
  blocks.reserve((cols + k - 1) / k);
  for (std::size_t start = 0; start < cols; start += k) blocks.push_back({start, std::min(k, cols - start)});
  return blocks;
}

std::uint32_t bucket_value(const BinaryMatrix& b, std::size_t row, std::size_t start, std::size_t width) {
  if (row >= b.rows()) throw ArgumentError("row " + std::to_string(row) + " out of range");
  check_block(b, {start, width});
  return extract_bits(b.row_data(row).data(), start, width);
}

std::vector<std::uint32_t> binary_row_order(const BinaryMatrix& b, ColumnBlock block) {
  check_block(b, block);
  check_rows(b.rows());
  std::vector<std::uint32_t> buckets;
  return build_block(b, block, buckets).permutation;
}

std::vector<std::uint32_t> full_segmentation(const BinaryMatrix& b, ColumnBlock block,
                                             std::span<const std::uint32_t> permutation) {
  check_block(b, block);
  check_rows(b.rows());
  if (permutation.size() != b.rows()) throw ArgumentError("permutation length does not match row count");

  const std::size_t segments = std::size_t{1} << block.width;
  std::vector<std::uint32_t> segmentation(segments, 0);
  std::uint32_t previous = 0;
  for (std::size_t p = 0; p < permutation.size(); ++p) {
    if (permutation[p] >= b.rows()) throw ArgumentError("permutation entry out of range");
    const std::uint32_t value = extract_bits(b.row_data(permutation[p]).data(), block.start, block.width);
    if (value < previous) throw ArgumentError("permutation is not the binary row order of the block");
    previous = value;
    if (value + 1 < segments) ++segmentation[value + 1];
  }
  for (std::size_t j = 1; j < segments; ++j) segmentation[j] += segmentation[j - 1];
  return segmentation;
}

RsrIndex preprocess(const BinaryMatrix& b, std::size_t k, std::size_t workers) {
  check_rows(b.rows());
  if (k < 1 || k > max_block_width(b.rows()))
    throw ArgumentError("k out of range: " + std::to_string(k) + " not in [1, " +
                        std::to_string(max_block_width(b.rows())) + "]");

  const auto layout = column_blocks(b.cols(), k);
  RsrIndex index{b.rows(), b.cols(), k, std::vector<BlockIndex>(layout.size())};
  parallel_for_ranges(layout.size(), workers, [&](std::size_t begin, std::size_t end) {
    std::vector<std::uint32_t> buckets;
    for (std::size_t i = begin; i < end; ++i) index.blocks[i] = build_block(b, layout[i], buckets);
  });
  return index;
}

TernaryIndex preprocess_ternary(const TernaryMatrix& a, std::size_t k, std::size_t workers) {
  const DecompositionPair halves = decompose_ternary(a);
  return {preprocess(halves.positive, k, workers), preprocess(halves.negative, k, workers)};
}

void validate(const RsrIndex& index) {
  if (index.rows > std::numeric_limits<std::uint32_t>::max()) invalid("too many rows");
  if (index.k < 1 || index.k > max_block_width(index.rows))
    invalid("k = " + std::to_string(index.k) + " outside [1, " + std::to_string(max_block_width(index.rows)) + "]");
  const auto layout = column_blocks(index.cols, index.k);
  if (index.blocks.size() != layout.size())
    invalid("expected " + std::to_string(layout.size()) + " blocks, found " + std::to_string(index.blocks.size()));

  std::vector<bool> seen(index.rows);
  for (std::size_t i = 0; i < layout.size(); ++i) {
    const BlockIndex& blk = index.blocks[i];
    const std::string where = "block " + std::to_string(i) + ": ";
    if (blk.width != layout[i].width)
      invalid(where + "width " + std::to_string(blk.width) + ", expected " + std::to_string(layout[i].width));
    if (blk.permutation.size() != index.rows) invalid(where + "permutation length");
    if (blk.segmentation.size() != (std::size_t{1} << blk.width)) invalid(where + "segmentation length");

    std::fill(seen.begin(), seen.end(), false);
    for (std::uint32_t r : blk.permutation) {
      if (r >= index.rows || seen[r]) invalid(where + "permutation is not a bijection");
      seen[r] = true;
    }
    if (blk.segmentation[0] != 0) invalid(where + "segmentation does not start at 0");
    for (std::size_t j = 0; j < blk.segmentation.size(); ++j) {
      const std::size_t begin = blk.segmentation[j];
      const std::size_t end = blk.segment_end(j);
      if (begin > end || end > index.rows) invalid(where + "segmentation is not monotone");
      for (std::size_t p = begin + 1; p < end; ++p)
        if (blk.permutation[p - 1] >= blk.permutation[p]) invalid(where + "rows within a segment are not in order");
    }
  }
}

void validate(const TernaryIndex& index) {
  validate(index.positive);
  validate(index.negative);
  if (index.positive.rows != index.negative.rows || index.positive.cols != index.negative.cols ||
      index.positive.k != index.negative.k)
    invalid("ternary halves disagree on rows, cols or k");
}

BinaryMatrix reconstruct_matrix(const RsrIndex& index) {
  validate(index);
  BinaryMatrix b(index.rows, index.cols);
  std::size_t start = 0;
  for (const BlockIndex& blk : index.blocks) {
    for (std::size_t j = 0; j < blk.segmentation.size(); ++j) {
      for (std::size_t p = blk.segmentation[j]; p < blk.segment_end(j); ++p) {
        const std::uint32_t row = blk.permutation[p];
        for (std::size_t c = 0; c < blk.width; ++c)
          if ((j >> (blk.width - 1 - c)) & 1U) b.set(row, start + c, true);
      }
    }
    start += blk.width;
  }
  return b;
}

} // namespace rsr
