// SPDX-License-Identifier: Apache-2.0
#include "rsr/kernels.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <string>

#if defined(__SSE2__)
#include <emmintrin.h>
#endif

#include "rsr/error.hpp"
#include "rsr/matrix.hpp"
#include "rsr/parallel.hpp"

namespace rsr {

namespace {

struct NoCount {
  void add(std::uint64_t) const noexcept {}
};

struct Count {
  OpCounter* counter;
  void add(std::uint64_t n) const noexcept { counter->additions += n; }
};

// Scratch for one thread: segment-start flags and running sums per permuted
// position, plus the 2^k sums of the current block.
struct Workspace {
  std::vector<unsigned char> starts;
  std::vector<double> running;
  std::vector<double> sums;

  void reserve(std::size_t rows, std::size_t width) {
    starts.resize(rows + 1);
    running.resize(rows + 1);
    sums.resize(std::size_t{1} << width);
  }
};

#if defined(__SSE2__)
using Lane = __m128d;
inline Lane lane_zero() { return _mm_setzero_pd(); }
// Adds x to the running sum, restarting from zero when `start` is 1.
inline Lane lane_step(Lane s, unsigned char start, const double* x) {
  const Lane keep = _mm_castsi128_pd(_mm_cvtsi64_si128(static_cast<long long>(std::uint64_t{start} - 1)));
  return _mm_add_sd(_mm_and_pd(s, keep), _mm_load_sd(x));
}
inline void lane_store(double* dst, Lane s) { _mm_store_sd(dst, s); }
#else
using Lane = double;
inline Lane lane_zero() { return 0.0; }
inline Lane lane_step(Lane s, unsigned char start, const double* x) {
  const std::uint64_t keep = std::uint64_t{start} - 1;
  return std::bit_cast<double>(std::bit_cast<std::uint64_t>(s) & keep) + *x;
}
inline void lane_store(double* dst, Lane s) { *dst = s; }
#endif

// Each segment is accumulated in ascending position order. The positions are
// cut into four runs at segment starts and the runs are interleaved, so that
// independent segments overlap without a data-dependent branch per segment.
template <class C>
void segmented_sum_impl(const double* v, const BlockIndex& blk, double* sums, Workspace& ws, C count) {
  constexpr std::size_t kLanes = 4;
  const std::uint32_t* perm = blk.permutation.data();
  const std::uint32_t* seg = blk.segmentation.data();
  const std::size_t segments = blk.segmentation.size();
  const std::size_t rows = blk.permutation.size();
  unsigned char* starts = ws.starts.data();
  double* running = ws.running.data();

  std::memset(starts, 0, rows + 1);
  for (std::size_t j = 0; j < segments; ++j) starts[seg[j]] = 1;

  std::size_t cut[kLanes + 1];
  cut[0] = 0;
  cut[kLanes] = rows;
  for (std::size_t l = 1; l < kLanes; ++l) {
    const auto target = static_cast<std::uint32_t>(rows * l / kLanes);
    const std::uint32_t* it = std::lower_bound(seg, seg + segments, target);
    cut[l] = std::max<std::size_t>(cut[l - 1], it == seg + segments ? rows : *it);
  }
  std::size_t common = rows;
  for (std::size_t l = 0; l < kLanes; ++l) common = std::min(common, cut[l + 1] - cut[l]);

  Lane s0 = lane_zero(), s1 = lane_zero(), s2 = lane_zero(), s3 = lane_zero();
  const std::size_t b0 = cut[0], b1 = cut[1], b2 = cut[2], b3 = cut[3];
  for (std::size_t t = 0; t < common; ++t) {
    s0 = lane_step(s0, starts[b0 + t], v + perm[b0 + t]);
    s1 = lane_step(s1, starts[b1 + t], v + perm[b1 + t]);
    s2 = lane_step(s2, starts[b2 + t], v + perm[b2 + t]);
    s3 = lane_step(s3, starts[b3 + t], v + perm[b3 + t]);
    lane_store(running + b0 + t, s0);
    lane_store(running + b1 + t, s1);
    lane_store(running + b2 + t, s2);
    lane_store(running + b3 + t, s3);
  }
  const Lane tails[kLanes] = {s0, s1, s2, s3};
  for (std::size_t l = 0; l < kLanes; ++l) {
    Lane s = tails[l];
    for (std::size_t p = cut[l] + common; p < cut[l + 1]; ++p) {
      s = lane_step(s, starts[p], v + perm[p]);
      lane_store(running + p, s);
    }
  }

  // An empty segment reads the zero kept past the last position.
  running[rows] = 0.0;
  for (std::size_t j = 0; j < segments; ++j) {
    const std::size_t end = j + 1 < segments ? seg[j + 1] : rows;
    const std::size_t nonempty = std::size_t{0} - static_cast<std::size_t>(end > seg[j]);
    sums[j] = running[rows ^ ((rows ^ (end - 1)) & nonempty)];
  }
  count.add(rows);
}

template <class C>
void block_product_rsr_impl(const double* u, std::uint32_t width, double* out, C count) {
  const std::size_t segments = std::size_t{1} << width;
  for (std::uint32_t c = 0; c < width; ++c) out[c] = 0.0;
  for (std::size_t j = 0; j < segments; ++j) {
    const double uj = u[j];
    for (std::uint32_t c = 0; c < width; ++c) out[c] += uj * static_cast<double>((j >> (width - 1 - c)) & 1U);
  }
  count.add(std::uint64_t{width} << width);
}

// The last output column is the sum over odd positions. Folding adjacent pairs
// turns the next column into the last one of a pattern half as tall; its odd
// positions are summed while folding.
template <class C>
void block_product_rsrpp_impl(double* x, std::uint32_t width, double* out, C count) {
  std::size_t len = std::size_t{1} << width;
  double even = 0.0, odd = 0.0;
  std::size_t t = 1;
  for (; t + 2 < len; t += 4) {
    even += x[t];
    odd += x[t + 2];
  }
  if (t < len) even += x[t];
  out[width - 1] = even + odd;
  count.add(len / 2);
  for (std::uint32_t level = width - 1; level > 0; --level) {
    const std::size_t half = len / 2;
    even = 0.0;
    odd = 0.0;
    std::size_t q = 0;
    for (; q + 4 <= half; q += 4) {
      x[q] = x[2 * q] + x[2 * q + 1];
      x[q + 1] = x[2 * q + 2] + x[2 * q + 3];
      x[q + 2] = x[2 * q + 4] + x[2 * q + 5];
      x[q + 3] = x[2 * q + 6] + x[2 * q + 7];
      even += x[q + 1];
      odd += x[q + 3];
    }
    for (; q < half; q += 2) {
      x[q] = x[2 * q] + x[2 * q + 1];
      x[q + 1] = x[2 * q + 2] + x[2 * q + 3];
      even += x[q + 1];
    }
    out[level - 1] = even + odd;
    count.add(half + half / 2);
    len = half;
  }
}

void check_width(std::size_t segments, std::size_t width) {
  if (width < 1 || width > kMaxBlockWidth || segments != (std::size_t{1} << width))
    throw ArgumentError("segmented sums of length " + std::to_string(segments) + " do not match width " +
                        std::to_string(width));
}

void check_input(std::span<const double> v, std::size_t rows) {
  if (v.size() != rows)
    throw DimensionError("dimension mismatch: vector length " + std::to_string(v.size()) + ", index rows " +
                         std::to_string(rows));
  require_finite(v);
}

// Writes the products of blocks [begin, end) into their slices of `out`.
template <class C>
void multiply_blocks(const double* v, const RsrIndex& index, Variant variant, std::size_t begin, std::size_t end,
                     double* out, Workspace& ws, C count) {
  ws.reserve(index.rows, index.k);
  double* scratch = ws.sums.data();
  for (std::size_t i = begin; i < end; ++i) {
    const BlockIndex& blk = index.blocks[i];
    double* slice = out + i * index.k;
    segmented_sum_impl(v, blk, scratch, ws, count);
    if (variant == Variant::rsr)
      block_product_rsr_impl(scratch, blk.width, slice, count);
    else
      block_product_rsrpp_impl(scratch, blk.width, slice, count);
  }
}

void multiply_ternary_blocks(const double* v, const TernaryIndex& index, Variant variant, std::size_t begin,
                             std::size_t end, double* out, Workspace& ws) {
  const std::size_t k = index.k();
  double negative[kMaxBlockWidth];
  ws.reserve(index.rows(), k);
  double* scratch = ws.sums.data();
  for (std::size_t i = begin; i < end; ++i) {
    double* slice = out + i * k;
    multiply_blocks(v, index.positive, variant, i, i + 1, out, ws, NoCount{});
    const BlockIndex& blk = index.negative.blocks[i];
    segmented_sum_impl(v, blk, scratch, ws, NoCount{});
    if (variant == Variant::rsr)
      block_product_rsr_impl(scratch, blk.width, negative, NoCount{});
    else
      block_product_rsrpp_impl(scratch, blk.width, negative, NoCount{});
    for (std::uint32_t c = 0; c < blk.width; ++c) slice[c] -= negative[c];
  }
}

void check_ternary(const TernaryIndex& index) {
  if (index.positive.rows != index.negative.rows || index.positive.cols != index.negative.cols ||
      index.positive.k != index.negative.k || index.positive.blocks.size() != index.negative.blocks.size())
    throw IndexError("invalid index: ternary halves disagree on shape");
}

} // namespace

bool bin_pattern_bit(std::uint32_t width, std::size_t row, std::size_t col) {
  if (width > kMaxBlockWidth || row >= (std::size_t{1} << width) || col >= width)
    throw ArgumentError("Bin_[" + std::to_string(width) + "] has no entry (" + std::to_string(row) + ", " +
                        std::to_string(col) + ")");
  return BinPattern{width}(row, col);
}

SegmentedSums segmented_sum(std::span<const double> v, const BlockIndex& block) {
  SegmentedSums out{block.width, std::vector<double>(block.segmentation.size())};
  segmented_sum(v, block, out.sums);
  return out;
}

void segmented_sum(std::span<const double> v, const BlockIndex& block, std::span<double> sums) {
  check_input(v, block.permutation.size());
  if (sums.size() != block.segmentation.size()) throw DimensionError("segmented sum output has the wrong length");
  Workspace ws;
  ws.reserve(block.permutation.size(), 0);
  segmented_sum_impl(v.data(), block, sums.data(), ws, NoCount{});
}

void segmented_sum(std::span<const double> v, const BlockIndex& block, std::span<double> sums, OpCounter& counter) {
  check_input(v, block.permutation.size());
  if (sums.size() != block.segmentation.size()) throw DimensionError("segmented sum output has the wrong length");
  Workspace ws;
  ws.reserve(block.permutation.size(), 0);
  segmented_sum_impl(v.data(), block, sums.data(), ws, Count{&counter});
}

std::vector<double> block_product_rsr(const SegmentedSums& u) {
  std::vector<double> out(u.width);
  block_product_rsr(u.sums, out);
  return out;
}

void block_product_rsr(std::span<const double> u, std::span<double> out) {
  check_width(u.size(), out.size());
  block_product_rsr_impl(u.data(), static_cast<std::uint32_t>(out.size()), out.data(), NoCount{});
}

void block_product_rsr(std::span<const double> u, std::span<double> out, OpCounter& counter) {
  check_width(u.size(), out.size());
  block_product_rsr_impl(u.data(), static_cast<std::uint32_t>(out.size()), out.data(), Count{&counter});
}

std::vector<double> block_product_rsrpp(const SegmentedSums& u) {
  std::vector<double> out(u.width);
  block_product_rsrpp(u.sums, out);
  return out;
}

void block_product_rsrpp(std::span<const double> u, std::span<double> out) {
  check_width(u.size(), out.size());
  std::vector<double> x(u.begin(), u.end());
  block_product_rsrpp_impl(x.data(), static_cast<std::uint32_t>(out.size()), out.data(), NoCount{});
}

void block_product_rsrpp(std::span<const double> u, std::span<double> out, OpCounter& counter) {
  check_width(u.size(), out.size());
  std::vector<double> x(u.begin(), u.end());
  block_product_rsrpp_impl(x.data(), static_cast<std::uint32_t>(out.size()), out.data(), Count{&counter});
}

void block_product_rsrpp_inplace(std::span<double> u, std::span<double> out) {
  check_width(u.size(), out.size());
  block_product_rsrpp_impl(u.data(), static_cast<std::uint32_t>(out.size()), out.data(), NoCount{});
}

std::vector<double> multiply_rsr(std::span<const double> v, const RsrIndex& index, Variant variant) {
  return multiply_parallel(v, index, variant, 1);
}

std::vector<double> multiply_rsr(std::span<const double> v, const RsrIndex& index, Variant variant,
                                 OpCounter& counter) {
  check_input(v, index.rows);
  std::vector<double> out(index.cols);
  Workspace ws;
  multiply_blocks(v.data(), index, variant, 0, index.blocks.size(), out.data(), ws, Count{&counter});
  return out;
}

std::vector<double> multiply_ternary(std::span<const double> v, const TernaryIndex& index, Variant variant) {
  return multiply_parallel(v, index, variant, 1);
}

std::vector<double> multiply_parallel(std::span<const double> v, const RsrIndex& index, Variant variant,
                                      std::size_t workers) {
  check_input(v, index.rows);
  std::vector<double> out(index.cols);
  parallel_for_ranges(index.blocks.size(), workers, [&](std::size_t begin, std::size_t end) {
    Workspace ws;
    multiply_blocks(v.data(), index, variant, begin, end, out.data(), ws, NoCount{});
  });
  return out;
}

std::vector<double> multiply_parallel(std::span<const double> v, const TernaryIndex& index, Variant variant,
                                      std::size_t workers) {
  check_ternary(index);
  check_input(v, index.rows());
  std::vector<double> out(index.cols());
  parallel_for_ranges(index.positive.blocks.size(), workers, [&](std::size_t begin, std::size_t end) {
    Workspace ws;
    multiply_ternary_blocks(v.data(), index, variant, begin, end, out.data(), ws);
  });
  return out;
}

} // namespace rsr
