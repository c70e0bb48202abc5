#pragma once

// Binary dump/load of sieve tables.
//
// Layout, all integers little-endian:
//
//   offset  size  field
//        0     8  magic "DIVCORR\0"
//        8     2  format version (1)
//       10     1  table kind (1 = spf, 2 = divisor, 3 = shifted product)
//       11     1  shift present (0 or 1)
//       12     8  limit N
//       20     8  shift v (0 when absent)
//       28     1  element width in bytes (4)
//       29     1  byte order (0 = little-endian)
//       30     2  reserved, zero
//       32  4N    entries for n = 1..N, unsigned 32-bit
//   32+4N     4  CRC-32 of every preceding byte

#include <array>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <boost/crc.hpp>

#include "divcorr/errors.hpp"
#include "divcorr/sieve.hpp"

namespace divcorr {

inline constexpr std::array<char, 8> kTableMagic = {'D', 'I', 'V', 'C', 'O', 'R', 'R', '\0'};
inline constexpr std::uint16_t kTableFormatVersion = 1;
inline constexpr std::size_t kTableHeaderSize = 32;

enum class TableKind : std::uint8_t { spf = 1, divisor = 2, shifted_product = 3 };

struct TableHeader {
  TableKind kind;
  std::uint64_t limit;
  bool has_shift;
  std::uint64_t shift;
};

namespace detail {

template <class Int>
void put_le(std::vector<unsigned char>& out, Int value) {
  for (std::size_t i = 0; i < sizeof(Int); ++i) out.push_back(static_cast<unsigned char>((std::uint64_t(value) >> (8 * i)) & 0xff));
}

template <class Int>
Int get_le(const unsigned char* p) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(Int); ++i) v |= std::uint64_t(p[i]) << (8 * i);
  return static_cast<Int>(v);
}

inline std::uint32_t crc32(const unsigned char* data, std::size_t size) {
  boost::crc_32_type crc;
  crc.process_bytes(data, size);
  return crc.checksum();
}

inline void write_raw_table(std::ostream& out, const TableHeader& header, std::span<const std::uint32_t> values) {
  if (values.size() != header.limit) throw contract_error("table payload length does not match its limit");
  std::vector<unsigned char> buf;
  buf.reserve(kTableHeaderSize + 4 * values.size() + 4);
  buf.insert(buf.end(), kTableMagic.begin(), kTableMagic.end());
  put_le<std::uint16_t>(buf, kTableFormatVersion);
  put_le<std::uint8_t>(buf, static_cast<std::uint8_t>(header.kind));
  put_le<std::uint8_t>(buf, header.has_shift ? 1 : 0);
  put_le<std::uint64_t>(buf, header.limit);
  put_le<std::uint64_t>(buf, header.has_shift ? header.shift : 0);
  put_le<std::uint8_t>(buf, 4);
  put_le<std::uint8_t>(buf, 0);
  put_le<std::uint16_t>(buf, 0);
  for (std::uint32_t v : values) put_le<std::uint32_t>(buf, v);
  put_le<std::uint32_t>(buf, crc32(buf.data(), buf.size()));
  out.write(reinterpret_cast<const char*>(buf.data()), std::streamsize(buf.size()));
  if (!out) throw std::runtime_error("failed to write table");
}

struct RawTable {
  TableHeader header;
  std::vector<std::uint32_t> values;  // index 0 unused
};

inline RawTable read_raw_table(std::istream& in) {
  std::vector<unsigned char> head(kTableHeaderSize);
  if (!in.read(reinterpret_cast<char*>(head.data()), std::streamsize(head.size()))) {
    throw format_error("truncated table header");
  }
  if (std::memcmp(head.data(), kTableMagic.data(), kTableMagic.size()) != 0) throw format_error("bad table magic");
  if (get_le<std::uint16_t>(&head[8]) != kTableFormatVersion) throw format_error("unsupported table format version");
  const auto kind = get_le<std::uint8_t>(&head[10]);
  if (kind < 1 || kind > 3) throw format_error("unknown table kind");
  const bool has_shift = get_le<std::uint8_t>(&head[11]) != 0;
  const auto limit = get_le<std::uint64_t>(&head[12]);
  const auto shift = get_le<std::uint64_t>(&head[20]);
  if (get_le<std::uint8_t>(&head[28]) != 4) throw format_error("unsupported element width");
  if (get_le<std::uint8_t>(&head[29]) != 0) throw format_error("unsupported byte order");
  if (limit > kMaxSieveLimit) throw format_error("table limit out of range");

  std::vector<unsigned char> body(4 * limit + 4);
  if (!in.read(reinterpret_cast<char*>(body.data()), std::streamsize(body.size()))) {
    throw format_error("truncated table payload");
  }
  boost::crc_32_type crc;
  crc.process_bytes(head.data(), head.size());
  crc.process_bytes(body.data(), 4 * limit);
  if (crc.checksum() != get_le<std::uint32_t>(&body[4 * limit])) throw format_error("table checksum mismatch");

  RawTable raw{{static_cast<TableKind>(kind), limit, has_shift, shift}, std::vector<std::uint32_t>(limit + 1, 0)};
  for (std::uint64_t i = 0; i < limit; ++i) raw.values[i + 1] = get_le<std::uint32_t>(&body[4 * i]);
  return raw;
}

inline RawTable read_expected(std::istream& in, TableKind kind) {
  RawTable raw = read_raw_table(in);
  if (raw.header.kind != kind) throw format_error("table kind mismatch");
  return raw;
}

}  // namespace detail

inline void write_table(std::ostream& out, const SpfTable& t) {
  detail::write_raw_table(out, {TableKind::spf, t.limit(), false, 0}, t.values());
}

inline void write_table(std::ostream& out, const DivisorTable& t) {
  detail::write_raw_table(out, {TableKind::divisor, t.limit(), false, 0}, t.values());
}

inline void write_table(std::ostream& out, const ShiftedProductTable& t) {
  detail::write_raw_table(out, {TableKind::shifted_product, t.limit(), true, t.shift()}, t.values());
}

inline SpfTable read_spf_table(std::istream& in) {
  auto raw = detail::read_expected(in, TableKind::spf);
  return SpfTable(raw.header.limit, std::move(raw.values));
}

inline DivisorTable read_divisor_table(std::istream& in) {
  auto raw = detail::read_expected(in, TableKind::divisor);
  return DivisorTable(raw.header.limit, std::move(raw.values));
}

inline ShiftedProductTable read_shifted_product_table(std::istream& in) {
  auto raw = detail::read_expected(in, TableKind::shifted_product);
  if (!raw.header.has_shift) throw format_error("shifted product table without a shift");
  return ShiftedProductTable(raw.header.limit, raw.header.shift, std::move(raw.values));
}

}  // namespace divcorr
