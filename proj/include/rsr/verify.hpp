// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "rsr/indexer.hpp"
#include "rsr/matrix.hpp"

namespace rsr {

struct VerifyOptions {
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  /// Test hook: breaks every built index before checking it.
  bool corrupt_index = false;
};

struct Mismatch {
  std::size_t trial = 0;
  std::size_t column = 0;
  double expected = 0.0;
  double actual = 0.0;
};

struct VerifyKResult {
  std::size_t k = 0;
  std::optional<Mismatch> rsr;
  std::optional<Mismatch> rsrpp;

  bool passed() const noexcept { return !rsr && !rsrpp; }
};

struct VerifyReport {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<VerifyKResult> per_k;

  bool passed() const noexcept;
};

/// Runs `trials` random integer vectors in [-100, 100] through the naive
/// product and both RSR variants, for every k in [1, max_block_width(rows)].
VerifyReport verify_matrix(const TernaryMatrix& a, const VerifyOptions& options);

/// Moves one row of block 0 of the positive half into a neighbouring bucket.
/// Any product that reads that row changes.
void corrupt_for_testing(TernaryIndex& index);

/// One line per k, then a PASS/FAIL line. Contains no timings.
void print_report(std::ostream& out, const VerifyReport& report);

} // namespace rsr
