// SPDX-License-Identifier: Apache-2.0
#include "rsr/matrix.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "rsr/error.hpp"

namespace rsr {

TernaryMatrix::TernaryMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols, 0) {}

TernaryMatrix::TernaryMatrix(std::size_t rows, std::size_t cols, std::vector<std::int8_t> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != rows * cols)
    throw ArgumentError("ternary matrix: expected " + std::to_string(rows * cols) + " entries, got " +
                        std::to_string(entries_.size()));
  for (std::int8_t e : entries_)
    if (e < -1 || e > 1) throw ArgumentError("ternary matrix: entry out of alphabet: " + std::to_string(e));
}

void TernaryMatrix::set(std::size_t r, std::size_t c, std::int8_t value) {
  if (value < -1 || value > 1) throw ArgumentError("ternary matrix: entry out of alphabet: " + std::to_string(value));
  entries_[r * cols_ + c] = value;
}

BinaryMatrix::BinaryMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), row_bytes_((cols + 7) / 8), bits_(rows * row_bytes_, 0) {}

void BinaryMatrix::set(std::size_t r, std::size_t c, bool value) noexcept {
  std::uint8_t& byte = bits_[r * row_bytes_ + c / 8];
  const auto mask = static_cast<std::uint8_t>(0x80U >> (c % 8));
  byte = value ? (byte | mask) : (byte & ~mask);
}

std::size_t BinaryMatrix::count_ones() const noexcept {
  std::size_t n = 0;
  for (std::uint8_t b : bits_) n += static_cast<std::size_t>(std::popcount(b));
  return n;
}

DecompositionPair decompose_ternary(const TernaryMatrix& a) {
  DecompositionPair pair{BinaryMatrix(a.rows(), a.cols()), BinaryMatrix(a.rows(), a.cols())};
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const auto row = a.row(r);
    for (std::size_t c = 0; c < a.cols(); ++c) {
      if (row[c] > 0)
        pair.positive.set(r, c, true);
      else if (row[c] < 0)
        pair.negative.set(r, c, true);
    }
  }
  return pair;
}

TernaryMatrix to_ternary(const BinaryMatrix& b) {
  std::vector<std::int8_t> entries(b.rows() * b.cols());
  for (std::size_t r = 0; r < b.rows(); ++r)
    for (std::size_t c = 0; c < b.cols(); ++c) entries[r * b.cols() + c] = b(r, c) ? 1 : 0;
  return TernaryMatrix(b.rows(), b.cols(), std::move(entries));
}

void require_finite(std::span<const double> v) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!std::isfinite(v[i])) throw ArgumentError("vector entry " + std::to_string(i) + " is not finite");
}

namespace {

void require_length(std::span<const double> v, std::size_t rows) {
  if (v.size() != rows)
    throw DimensionError("dimension mismatch: vector length " + std::to_string(v.size()) + ", matrix rows " +
                         std::to_string(rows));
}

} // namespace

std::vector<double> naive_multiply(std::span<const double> v, const TernaryMatrix& a) {
  require_length(v, a.rows());
  require_finite(v);
  const std::size_t cols = a.cols();
  std::vector<double> out(cols, 0.0);
  double* acc = out.data();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double vi = v[i];
    const std::int8_t* row = a.row(i).data();
    for (std::size_t j = 0; j < cols; ++j) acc[j] += vi * static_cast<double>(row[j]);
  }
  return out;
}

std::vector<double> naive_multiply(std::span<const double> v, const BinaryMatrix& b) {
  require_length(v, b.rows());
  require_finite(v);
  const std::size_t cols = b.cols();
  std::vector<double> out(cols, 0.0);
  for (std::size_t i = 0; i < b.rows(); ++i) {
    const double vi = v[i];
    const std::uint8_t* row = b.row_data(i).data();
    for (std::size_t j = 0; j < cols; ++j)
      if ((row[j / 8] >> (7 - j % 8)) & 1U) out[j] += vi;
  }
  return out;
}

} // namespace rsr
