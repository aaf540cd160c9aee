// SPDX-License-Identifier: Apache-2.0
#include "rsr/index_store.hpp"

#include <limits>
#include <string>

#include "byte_io.hpp"
#include "rsr/error.hpp"

namespace rsr {

namespace {

constexpr std::string_view kMagic = "RSX1";

void write_header(detail::ByteWriter& w, IndexKind kind, const RsrIndex& shape) {
  w.magic(kMagic);
  w.u16(IndexFileHeader::kVersion);
  w.u8(static_cast<std::uint8_t>(kind));
  w.u64(shape.rows);
  w.u64(shape.cols);
  w.u16(static_cast<std::uint16_t>(shape.k));
  w.u32(static_cast<std::uint32_t>(shape.blocks.size()));
}

void write_blocks(detail::ByteWriter& w, const RsrIndex& index) {
  for (const BlockIndex& blk : index.blocks) {
    w.u16(static_cast<std::uint16_t>(blk.width));
    for (std::uint32_t r : blk.permutation) w.u32(r);
    for (std::uint32_t s : blk.segmentation) w.u32(s);
  }
}

std::uint64_t blocks_size(const RsrIndex& index) {
  std::uint64_t bytes = 0;
  for (const BlockIndex& blk : index.blocks)
    bytes += 2 + 4 * std::uint64_t{blk.permutation.size()} + 4 * std::uint64_t{blk.segmentation.size()};
  return bytes;
}

IndexFileHeader parse_header(detail::ByteReader& r) {
  if (r.remaining() < 4) throw FormatError("malformed header");
  if (!r.magic_matches(kMagic)) throw FormatError("bad magic");
  if (r.remaining() < IndexFileHeader::kSize) throw FormatError("truncated payload");
  r.skip(4);
  IndexFileHeader h;
  h.version = r.u16();
  if (h.version != IndexFileHeader::kVersion)
    throw FormatError("version mismatch: file has " + std::to_string(h.version) + ", expected 1");
  const std::uint8_t kind = r.u8();
  if (kind != static_cast<std::uint8_t>(IndexKind::binary) && kind != static_cast<std::uint8_t>(IndexKind::ternary))
    throw FormatError("unknown index kind " + std::to_string(kind));
  h.kind = static_cast<IndexKind>(kind);
  h.rows = r.u64();
  h.cols = r.u64();
  h.k = r.u16();
  h.block_count = r.u32();
  if (h.rows > std::numeric_limits<std::uint32_t>::max()) throw IndexError("invalid index: too many rows");
  if (h.k < 1 || h.k > kMaxBlockWidth) throw IndexError("invalid index: k = " + std::to_string(h.k));
  if (h.block_count != (h.cols + h.k - 1) / h.k) throw IndexError("invalid index: block count does not match cols/k");
  return h;
}

RsrIndex read_blocks(detail::ByteReader& r, const IndexFileHeader& h) {
  RsrIndex index{static_cast<std::size_t>(h.rows), static_cast<std::size_t>(h.cols), h.k, {}};
  // The smallest block is 10 bytes (width 1, no rows); reject truncated files before allocating.
  if (h.block_count > r.remaining() / 10) throw FormatError("truncated payload");
  index.blocks.resize(h.block_count);
  for (BlockIndex& blk : index.blocks) {
    const std::uint16_t width = r.u16();
    if (width < 1 || width > h.k) throw IndexError("invalid index: block width " + std::to_string(width));
    const std::uint64_t segments = std::uint64_t{1} << width;
    r.need(static_cast<std::size_t>(4 * (h.rows + segments)));
    blk.width = width;
    blk.permutation.resize(static_cast<std::size_t>(h.rows));
    for (auto& p : blk.permutation) p = r.u32();
    blk.segmentation.resize(static_cast<std::size_t>(segments));
    for (auto& s : blk.segmentation) s = r.u32();
  }
  return index;
}

SpaceReport make_report(std::uint64_t entries, std::uint64_t rows, std::uint64_t cols, std::uint64_t bytes) {
  SpaceReport s;
  s.index_entries = entries;
  s.dense_entries = rows * cols;
  s.entry_ratio = s.dense_entries ? static_cast<double>(entries) / static_cast<double>(s.dense_entries) : 0.0;
  s.serialized_bytes = bytes;
  s.dense_bytes_1B = rows * cols;
  s.byte_ratio = s.dense_bytes_1B ? static_cast<double>(bytes) / static_cast<double>(s.dense_bytes_1B) : 0.0;
  return s;
}

std::uint64_t entry_count(const RsrIndex& index) {
  std::uint64_t n = 0;
  for (const BlockIndex& blk : index.blocks) n += blk.permutation.size() + blk.segmentation.size();
  return n;
}

} // namespace

std::vector<std::uint8_t> serialize(const RsrIndex& index) {
  validate(index);
  detail::ByteWriter w;
  w.reserve(static_cast<std::size_t>(serialized_size(index)));
  write_header(w, IndexKind::binary, index);
  write_blocks(w, index);
  return std::move(w.bytes());
}

std::vector<std::uint8_t> serialize(const TernaryIndex& index) {
  validate(index);
  detail::ByteWriter w;
  w.reserve(static_cast<std::size_t>(serialized_size(index)));
  write_header(w, IndexKind::ternary, index.positive);
  write_blocks(w, index.positive);
  write_blocks(w, index.negative);
  return std::move(w.bytes());
}

IndexFileHeader read_header(std::span<const std::uint8_t> bytes) {
  detail::ByteReader r(bytes);
  return parse_header(r);
}

StoredIndex deserialize(std::span<const std::uint8_t> bytes) {
  detail::ByteReader r(bytes);
  const IndexFileHeader h = parse_header(r);
  if (h.kind == IndexKind::binary) {
    RsrIndex index = read_blocks(r, h);
    if (!r.at_end()) throw FormatError("trailing data after index");
    validate(index);
    return index;
  }
  TernaryIndex index;
  index.positive = read_blocks(r, h);
  index.negative = read_blocks(r, h);
  if (!r.at_end()) throw FormatError("trailing data after index");
  validate(index);
  return index;
}

void save_index(const RsrIndex& index, const std::filesystem::path& path) {
  detail::write_file(path, serialize(index));
}

void save_index(const TernaryIndex& index, const std::filesystem::path& path) {
  detail::write_file(path, serialize(index));
}

StoredIndex load_index(const std::filesystem::path& path) { return deserialize(detail::read_file(path)); }

std::uint64_t serialized_size(const RsrIndex& index) { return IndexFileHeader::kSize + blocks_size(index); }

std::uint64_t serialized_size(const TernaryIndex& index) {
  return IndexFileHeader::kSize + blocks_size(index.positive) + blocks_size(index.negative);
}

SpaceReport space_report(const RsrIndex& index) {
  return make_report(entry_count(index), index.rows, index.cols, serialized_size(index));
}

SpaceReport space_report(const TernaryIndex& index) {
  return make_report(entry_count(index.positive) + entry_count(index.negative), index.rows(), index.cols(),
                     serialized_size(index));
}

} // namespace rsr
