// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace rsr {

/// Dense row-major matrix over {-1, 0, +1}, one signed byte per entry.
class TernaryMatrix {
public:
  TernaryMatrix() = default;
  /// All-zero matrix.
  TernaryMatrix(std::size_t rows, std::size_t cols);
  /// Takes ownership of `entries`; throws ArgumentError on a size mismatch or a value outside {-1,0,1}.
  TernaryMatrix(std::size_t rows, std::size_t cols, std::vector<std::int8_t> entries);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  std::int8_t operator()(std::size_t r, std::size_t c) const noexcept { return entries_[r * cols_ + c]; }
  void set(std::size_t r, std::size_t c, std::int8_t value);

  std::span<const std::int8_t> row(std::size_t r) const noexcept {
    return {entries_.data() + r * cols_, cols_};
  }
  std::span<const std::int8_t> entries() const noexcept { return entries_; }

  friend bool operator==(const TernaryMatrix&, const TernaryMatrix&) = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::int8_t> entries_;
};

/// Bit-packed row-major 0/1 matrix. Bits are MSB-first within a byte, every
/// row starts on a byte boundary, and padding bits are always zero.
class BinaryMatrix {
public:
  BinaryMatrix() = default;
  BinaryMatrix(std::size_t rows, std::size_t cols);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t row_bytes() const noexcept { return row_bytes_; }

  bool operator()(std::size_t r, std::size_t c) const noexcept {
    return (bits_[r * row_bytes_ + c / 8] >> (7 - c % 8)) & 1U;
  }
  void set(std::size_t r, std::size_t c, bool value) noexcept;

  std::span<const std::uint8_t> row_data(std::size_t r) const noexcept {
    return {bits_.data() + r * row_bytes_, row_bytes_};
  }
  std::span<std::uint8_t> row_data(std::size_t r) noexcept {
    return {bits_.data() + r * row_bytes_, row_bytes_};
  }
  std::span<const std::uint8_t> bytes() const noexcept { return bits_; }

  /// Number of set bits.
  std::size_t count_ones() const noexcept;

  friend bool operator==(const BinaryMatrix&, const BinaryMatrix&) = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t row_bytes_ = 0;
  std::vector<std::uint8_t> bits_;
};

/// The two binary halves of a ternary matrix, A = positive - negative.
struct DecompositionPair {
  BinaryMatrix positive;
  BinaryMatrix negative;
};

DecompositionPair decompose_ternary(const TernaryMatrix& a);

/// Ternary view of a binary matrix (entries 0/1).
TernaryMatrix to_ternary(const BinaryMatrix& b);

/// Throws ArgumentError if any value is NaN or infinite.
void require_finite(std::span<const double> v);

/// Reference product v * A. Each output column accumulates in ascending row
/// order, so results are reproducible bit for bit.
std::vector<double> naive_multiply(std::span<const double> v, const TernaryMatrix& a);
std::vector<double> naive_multiply(std::span<const double> v, const BinaryMatrix& b);

} // namespace rsr
