// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <variant>
#include <vector>

#include "rsr/matrix.hpp"

namespace rsr {

// On-disk matrix and vector formats.
//
//   .tmx     ASCII: "<rows> <cols>\n" then one line per row of space-separated entries.
//   .tpk     "TPK1", u64 rows, u64 cols, 2 bits per entry (00=0, 01=+1, 10=-1),
//            MSB-first, rows padded to a byte.
//   .bpk     "BPK1", u64 rows, u64 cols, 1 bit per entry, MSB-first, rows padded to a byte.
//   .vecf64  "VF64", u64 length, then IEEE-754 binary64 values.
//
// All integers are little-endian.

enum class MatrixFormat { text, packed_ternary, packed_binary };

/// Picks the format from the file extension (.tmx, .tpk, .bpk).
MatrixFormat format_from_path(const std::filesystem::path& path);

using AnyMatrix = std::variant<TernaryMatrix, BinaryMatrix>;

TernaryMatrix read_ternary_text(std::istream& in);
BinaryMatrix read_binary_text(std::istream& in);
void write_text(std::ostream& out, const TernaryMatrix& a);
void write_text(std::ostream& out, const BinaryMatrix& b);

TernaryMatrix read_tpk(std::istream& in);
void write_tpk(std::ostream& out, const TernaryMatrix& a);
BinaryMatrix read_bpk(std::istream& in);
void write_bpk(std::ostream& out, const BinaryMatrix& b);

std::vector<double> read_vector(std::istream& in);
void write_vector(std::ostream& out, std::span<const double> v);

/// Text files load as ternary; .bpk loads as binary.
AnyMatrix load_matrix(const std::filesystem::path& path, MatrixFormat format);
/// Loads any supported format as a ternary matrix.
TernaryMatrix load_ternary_matrix(const std::filesystem::path& path);
/// Loads a .bpk file, or a .tmx containing only 0/1.
BinaryMatrix load_binary_matrix(const std::filesystem::path& path);

void save_matrix(const std::filesystem::path& path, const TernaryMatrix& a, MatrixFormat format);
void save_matrix(const std::filesystem::path& path, const BinaryMatrix& b, MatrixFormat format);

std::vector<double> load_vector(const std::filesystem::path& path);
void save_vector(const std::filesystem::path& path, std::span<const double> v);

} // namespace rsr
