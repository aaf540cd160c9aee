// SPDX-License-Identifier: Apache-2.0
#include "rsr/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <iterator>
#include <limits>
#include <ostream>
#include <string>

#include "byte_io.hpp"
#include "rsr/error.hpp"

namespace rsr {

namespace detail {

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed: " + path.string());
  return bytes;
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

} // namespace detail

namespace {

constexpr std::string_view kTernaryMagic = "TPK1";
constexpr std::string_view kBinaryMagic = "BPK1";
constexpr std::string_view kVectorMagic = "VF64";

std::vector<std::uint8_t> slurp(std::istream& in) {
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return bytes;
}

void emit(std::ostream& out, std::span<const std::uint8_t> bytes) {
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed");
}

// Splits `line` on spaces/tabs, ignoring a trailing '\r'.
template <class Fn>
void for_each_token(std::string_view line, Fn&& fn) {
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) fn(line.substr(i, j - i));
    i = j;
  }
}

struct TextHeader {
  std::size_t rows = 0;
  std::size_t cols = 0;
};

TextHeader read_text_header(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("malformed header");
  std::vector<std::size_t> values;
  bool ok = true;
  for_each_token(line, [&](std::string_view tok) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) ok = false;
    values.push_back(v);
  });
  if (!ok || values.size() != 2) throw FormatError("malformed header");
  return {values[0], values[1]};
}

// Reads rows x cols entries, one text line per row; `parse` maps a token to its value or throws.
template <class Matrix, class Parse>
void read_text_rows(std::istream& in, TextHeader h, Matrix& m, Parse&& parse) {
  std::string line;
  for (std::size_t r = 0; r < h.rows; ++r) {
    if (!std::getline(in, line)) throw FormatError("truncated payload");
    std::size_t c = 0;
    for_each_token(line, [&](std::string_view tok) {
      if (c >= h.cols) throw FormatError("malformed row " + std::to_string(r) + ": too many entries");
      m.set(r, c, parse(tok));
      ++c;
    });
    if (c != h.cols) throw FormatError("truncated payload");
  }
  while (std::getline(in, line))
    for_each_token(line, [](std::string_view) { throw FormatError("trailing data after matrix"); });
}

std::int8_t parse_trit(std::string_view tok) {
  if (tok == "0") return 0;
  if (tok == "1") return 1;
  if (tok == "-1") return -1;
  throw FormatError("entry out of alphabet: " + std::string(tok));
}

bool parse_bit(std::string_view tok) {
  if (tok == "0") return false;
  if (tok == "1") return true;
  throw FormatError("entry out of alphabet: " + std::string(tok));
}

struct PackedHeader {
  std::uint64_t rows = 0;
  std::uint64_t cols = 0;
};

PackedHeader read_packed_header(detail::ByteReader& r, std::string_view magic) {
  if (r.remaining() < 20) throw FormatError("malformed header");
  if (!r.magic_matches(magic)) throw FormatError("bad magic");
  r.skip(4);
  PackedHeader h{r.u64(), r.u64()};
  constexpr std::uint64_t kLimit = std::uint64_t{1} << 40;
  if (h.rows > kLimit || h.cols > kLimit) throw FormatError("malformed header: dimensions too large");
  return h;
}

// Bytes per row when each entry takes `bits` bits.
std::uint64_t packed_row_bytes(std::uint64_t cols, unsigned bits) { return (cols * bits + 7) / 8; }

void require_payload(const detail::ByteReader& r, PackedHeader h, std::uint64_t row_bytes) {
  if (h.rows != 0 && row_bytes > std::numeric_limits<std::uint64_t>::max() / h.rows)
    throw FormatError("malformed header: dimensions too large");
  r.need(static_cast<std::size_t>(h.rows * row_bytes));
}

} // namespace

MatrixFormat format_from_path(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".tmx") return MatrixFormat::text;
  if (ext == ".tpk") return MatrixFormat::packed_ternary;
  if (ext == ".bpk") return MatrixFormat::packed_binary;
  throw ArgumentError("unknown matrix extension '" + ext + "' (expected .tmx, .tpk or .bpk)");
}

TernaryMatrix read_ternary_text(std::istream& in) {
  const TextHeader h = read_text_header(in);
  TernaryMatrix a(h.rows, h.cols);
  read_text_rows(in, h, a, parse_trit);
  return a;
}

BinaryMatrix read_binary_text(std::istream& in) {
  const TextHeader h = read_text_header(in);
  BinaryMatrix b(h.rows, h.cols);
  read_text_rows(in, h, b, parse_bit);
  return b;
}

void write_text(std::ostream& out, const TernaryMatrix& a) {
  std::string buf = std::to_string(a.rows()) + ' ' + std::to_string(a.cols()) + '\n';
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const auto row = a.row(r);
    for (std::size_t c = 0; c < a.cols(); ++c) {
      if (c) buf += ' ';
      buf += row[c] < 0 ? "-1" : (row[c] > 0 ? "1" : "0");
    }
    buf += '\n';
  }
  out << buf;
  if (!out) throw IoError("write failed");
}

void write_text(std::ostream& out, const BinaryMatrix& b) {
  std::string buf = std::to_string(b.rows()) + ' ' + std::to_string(b.cols()) + '\n';
  for (std::size_t r = 0; r < b.rows(); ++r) {
    for (std::size_t c = 0; c < b.cols(); ++c) {
      if (c) buf += ' ';
      buf += b(r, c) ? '1' : '0';
    }
    buf += '\n';
  }
  out << buf;
  if (!out) throw IoError("write failed");
}

TernaryMatrix read_tpk(std::istream& in) {
  const auto bytes = slurp(in);
  detail::ByteReader r(bytes);
  const PackedHeader h = read_packed_header(r, kTernaryMagic);
  const std::uint64_t row_bytes = packed_row_bytes(h.cols, 2);
  require_payload(r, h, row_bytes);

  TernaryMatrix a(h.rows, h.cols);
  for (std::uint64_t row = 0; row < h.rows; ++row) {
    const auto data = r.raw(row_bytes);
    for (std::uint64_t c = 0; c < row_bytes * 4; ++c) {
      const unsigned code = (data[c / 4] >> (6 - 2 * (c % 4))) & 0x3U;
      if (c >= h.cols) {
        if (code != 0) throw FormatError("nonzero padding bits");
        continue;
      }
      if (code == 0x3U) throw FormatError("entry out of alphabet: code 11");
      a.set(row, c, code == 0x1U ? 1 : (code == 0x2U ? -1 : 0));
    }
  }
  if (!r.at_end()) throw FormatError("trailing data after matrix");
  return a;
}

void write_tpk(std::ostream& out, const TernaryMatrix& a) {
  detail::ByteWriter w;
  w.magic(kTernaryMagic);
  w.u64(a.rows());
  w.u64(a.cols());
  const auto row_bytes = static_cast<std::size_t>(packed_row_bytes(a.cols(), 2));
  std::vector<std::uint8_t> packed(row_bytes);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    std::fill(packed.begin(), packed.end(), 0);
    const auto row = a.row(r);
    for (std::size_t c = 0; c < a.cols(); ++c) {
      const unsigned code = row[c] > 0 ? 0x1U : (row[c] < 0 ? 0x2U : 0x0U);
      packed[c / 4] |= static_cast<std::uint8_t>(code << (6 - 2 * (c % 4)));
    }
    w.raw(packed);
  }
  emit(out, w.bytes());
}

BinaryMatrix read_bpk(std::istream& in) {
  const auto bytes = slurp(in);
  detail::ByteReader r(bytes);
  const PackedHeader h = read_packed_header(r, kBinaryMagic);
  const std::uint64_t row_bytes = packed_row_bytes(h.cols, 1);
  require_payload(r, h, row_bytes);

  BinaryMatrix b(h.rows, h.cols);
  const unsigned tail = h.cols % 8;
  const auto pad_mask = static_cast<std::uint8_t>(tail == 0 ? 0 : (0xFFU >> tail));
  for (std::uint64_t row = 0; row < h.rows; ++row) {
    const auto data = r.raw(row_bytes);
    if (row_bytes != 0 && (data[row_bytes - 1] & pad_mask) != 0) throw FormatError("nonzero padding bits");
    std::copy(data.begin(), data.end(), b.row_data(row).begin());
  }
  if (!r.at_end()) throw FormatError("trailing data after matrix");
  return b;
}

void write_bpk(std::ostream& out, const BinaryMatrix& b) {
  detail::ByteWriter w;
  w.magic(kBinaryMagic);
  w.u64(b.rows());
  w.u64(b.cols());
  w.raw(b.bytes());
  emit(out, w.bytes());
}

std::vector<double> read_vector(std::istream& in) {
  const auto bytes = slurp(in);
  detail::ByteReader r(bytes);
  if (r.remaining() < 12) throw FormatError("malformed header");
  if (!r.magic_matches(kVectorMagic)) throw FormatError("bad magic");
  r.skip(4);
  const std::uint64_t len = r.u64();
  if (len > r.remaining() / 8) throw FormatError("truncated payload");
  std::vector<double> v(static_cast<std::size_t>(len));
  for (auto& x : v) {
    x = r.f64();
    if (!std::isfinite(x)) throw FormatError("non-finite vector entry");
  }
  if (!r.at_end()) throw FormatError("trailing data after vector");
  return v;
}

void write_vector(std::ostream& out, std::span<const double> v) {
  detail::ByteWriter w;
  w.reserve(12 + 8 * v.size());
  w.magic(kVectorMagic);
  w.u64(v.size());
  for (double x : v) w.f64(x);
  emit(out, w.bytes());
}

namespace {

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

} // namespace

AnyMatrix load_matrix(const std::filesystem::path& path, MatrixFormat format) {
  auto in = open_in(path);
  switch (format) {
  case MatrixFormat::text: return read_ternary_text(in);
  case MatrixFormat::packed_ternary: return read_tpk(in);
  case MatrixFormat::packed_binary: return read_bpk(in);
  }
  throw ArgumentError("unknown matrix format");
}

TernaryMatrix load_ternary_matrix(const std::filesystem::path& path) {
  auto m = load_matrix(path, format_from_path(path));
  if (auto* b = std::get_if<BinaryMatrix>(&m)) return to_ternary(*b);
  return std::get<TernaryMatrix>(std::move(m));
}

BinaryMatrix load_binary_matrix(const std::filesystem::path& path) {
  const MatrixFormat f = format_from_path(path);
  auto in = open_in(path);
  switch (f) {
  case MatrixFormat::text: return read_binary_text(in);
  case MatrixFormat::packed_binary: return read_bpk(in);
  case MatrixFormat::packed_ternary: break;
  }
  throw ArgumentError("a binary matrix cannot be loaded from " + path.string());
}

void save_matrix(const std::filesystem::path& path, const TernaryMatrix& a, MatrixFormat format) {
  if (format == MatrixFormat::packed_binary) throw ArgumentError("a ternary matrix cannot be saved as .bpk");
  auto out = open_out(path);
  if (format == MatrixFormat::text)
    write_text(out, a);
  else
    write_tpk(out, a);
}

void save_matrix(const std::filesystem::path& path, const BinaryMatrix& b, MatrixFormat format) {
  auto out = open_out(path);
  switch (format) {
  case MatrixFormat::text: write_text(out, b); break;
  case MatrixFormat::packed_binary: write_bpk(out, b); break;
  case MatrixFormat::packed_ternary: write_tpk(out, to_ternary(b)); break;
  }
}

std::vector<double> load_vector(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_vector(in);
}

void save_vector(const std::filesystem::path& path, std::span<const double> v) {
  auto out = open_out(path);
  write_vector(out, v);
}

} // namespace rsr
