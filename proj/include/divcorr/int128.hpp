#pragma once

// Exact 128-bit integer helpers. Every product and sum that feeds an identity
// check goes through the checked operations below, so overflow surfaces as an
// exception rather than a wrapped value.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>
#include <string_view>

#include "divcorr/errors.hpp"

namespace divcorr {

using int128 = __int128;
using uint128 = unsigned __int128;

inline int128 checked_add(int128 a, int128 b) {
  int128 r;
  if (__builtin_add_overflow(a, b, &r)) throw overflow_error("int128 addition overflow");
  return r;
}

inline int128 checked_sub(int128 a, int128 b) {
  int128 r;
  if (__builtin_sub_overflow(a, b, &r)) throw overflow_error("int128 subtraction overflow");
  return r;
}

inline int128 checked_mul(int128 a, int128 b) {
  int128 r;
  if (__builtin_mul_overflow(a, b, &r)) throw overflow_error("int128 multiplication overflow");
  return r;
}

inline int128 checked_pow(int128 base, unsigned exp) {
  int128 r = 1;
  while (exp > 0) {
    if (exp & 1u) r = checked_mul(r, base);
    exp >>= 1;
    if (exp > 0) base = checked_mul(base, base);
  }
  return r;
}

inline std::string to_string(int128 value) {
  if (value == 0) return "0";
  const bool negative = value < 0;
  // Work in the unsigned domain so INT128_MIN round-trips.
  uint128 mag = negative ? uint128(0) - uint128(value) : uint128(value);
  std::string digits;
  while (mag > 0) {
    digits.push_back(char('0' + int(mag % 10)));
    mag /= 10;
  }
  if (negative) digits.push_back('-');
  std::reverse(digits.begin(), digits.end());
  return digits;
}

inline int128 parse_int128(std::string_view text) {
  if (text.empty()) throw contract_error("empty integer literal");
  bool negative = false;
  std::size_t i = 0;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    i = 1;
  }
  if (i == text.size()) throw contract_error("integer literal has no digits");
  const uint128 limit = negative ? uint128(1) << 127 : (uint128(1) << 127) - 1;
  uint128 mag = 0;
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (c < '0' || c > '9') throw contract_error("invalid integer literal: " + std::string(text));
    const unsigned digit = unsigned(c - '0');
    if (mag > (limit - digit) / 10) throw overflow_error("integer literal exceeds int128");
    mag = mag * 10 + digit;
  }
  return negative ? int128(uint128(0) - mag) : int128(mag);
}

}  // namespace divcorr
