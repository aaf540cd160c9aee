// SPDX-License-Identifier: Apache-2.0
// Test-only reference computations. Nothing here calls the code under test.
#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "rsr/matrix.hpp"

namespace oracle {

using IntMatrix = std::vector<std::vector<int>>;

// The 6x6 example binary matrix used throughout the docs and tests.
inline const IntMatrix kExample = {
    {0, 1, 1, 1, 0, 1},
    {0, 0, 0, 1, 1, 1},
    {0, 1, 1, 1, 1, 0},
    {1, 1, 0, 0, 1, 0},
    {0, 0, 1, 1, 0, 1},
    {0, 0, 0, 0, 1, 0},
};

inline const std::vector<double> kExampleVector = {3, 2, 4, 5, 9, 1};

inline rsr::BinaryMatrix to_binary(const IntMatrix& m) {
  rsr::BinaryMatrix b(m.size(), m.empty() ? 0 : m[0].size());
  for (std::size_t r = 0; r < m.size(); ++r)
    for (std::size_t c = 0; c < m[r].size(); ++c) b.set(r, c, m[r][c] != 0);
  return b;
}

inline rsr::TernaryMatrix to_ternary(const IntMatrix& m) {
  rsr::TernaryMatrix a(m.size(), m.empty() ? 0 : m[0].size());
  for (std::size_t r = 0; r < m.size(); ++r)
    for (std::size_t c = 0; c < m[r].size(); ++c) a.set(r, c, static_cast<std::int8_t>(m[r][c]));
  return a;
}

inline IntMatrix to_ints(const rsr::BinaryMatrix& b) {
  IntMatrix m(b.rows(), std::vector<int>(b.cols()));
  for (std::size_t r = 0; r < b.rows(); ++r)
    for (std::size_t c = 0; c < b.cols(); ++c) m[r][c] = b(r, c) ? 1 : 0;
  return m;
}

inline IntMatrix to_ints(const rsr::TernaryMatrix& a) {
  IntMatrix m(a.rows(), std::vector<int>(a.cols()));
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) m[r][c] = a(r, c);
  return m;
}

// Column-wise dot products computed in 64-bit integers; exact for integer vectors.
inline std::vector<double> column_dots(const std::vector<double>& v, const IntMatrix& m, std::size_t cols) {
  std::vector<double> out(cols);
  for (std::size_t c = 0; c < cols; ++c) {
    long long s = 0;
    for (std::size_t r = 0; r < m.size(); ++r) s += static_cast<long long>(v[r]) * m[r][c];
    out[c] = static_cast<double>(s);
  }
  return out;
}

inline std::uint32_t bucket(const IntMatrix& m, std::size_t row, std::size_t start, std::size_t width) {
  std::uint32_t value = 0;
  for (std::size_t c = start; c < start + width; ++c) value = value * 2 + static_cast<std::uint32_t>(m[row][c]);
  return value;
}

// Comparison sort with stable ties.
inline std::vector<std::uint32_t> stable_order(const IntMatrix& m, std::size_t start, std::size_t width) {
  std::vector<std::uint32_t> order(m.size());
  std::iota(order.begin(), order.end(), 0U);
  std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return bucket(m, a, start, width) < bucket(m, b, start, width);
  });
  return order;
}

// L[j] = rows with bucket value < j.
inline std::vector<std::uint32_t> cumulative_histogram(const IntMatrix& m, std::size_t start, std::size_t width) {
  std::vector<std::uint32_t> l(std::size_t{1} << width, 0);
  for (std::size_t r = 0; r < m.size(); ++r)
    for (std::size_t j = bucket(m, r, start, width) + 1; j < l.size(); ++j) ++l[j];
  return l;
}

// u * Bin_[width] by enumerating rows of the pattern matrix as bit strings.
inline std::vector<double> pattern_product(const std::vector<double>& u, std::size_t width) {
  std::vector<double> r(width, 0.0);
  for (std::size_t j = 0; j < u.size(); ++j) {
    std::string bits;
    for (std::size_t c = 0; c < width; ++c) bits.insert(bits.begin(), ((j >> c) & 1U) ? '1' : '0');
    for (std::size_t c = 0; c < width; ++c)
      if (bits[c] == '1') r[c] += u[j];
  }
  return r;
}

inline IntMatrix random_ints(std::size_t rows, std::size_t cols, int lo, int hi, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> d(lo, hi);
  IntMatrix m(rows, std::vector<int>(cols));
  for (auto& row : m)
    for (auto& x : row) x = d(rng);
  return m;
}

inline std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng, int lo = -100, int hi = 100) {
  std::uniform_int_distribution<int> d(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

// Unique scratch directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& tag) {
  static std::mt19937_64 rng(std::random_device{}());
  auto dir = std::filesystem::temp_directory_path() / ("rsr_" + tag + "_" + std::to_string(rng()));
  std::filesystem::create_directories(dir);
  return dir;
}

} // namespace oracle
