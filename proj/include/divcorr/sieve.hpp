#pragma once

// Bulk tables over [1, N]: smallest prime factor, d(n), and d(n(n+v)).
//
// Small limits use a single linear sieve. Once N exceeds the configured
// segment size the tables are built segment by segment (optionally on several
// threads); each segment is a disjoint slice of the output, so the result is
// byte-identical to the monolithic path regardless of thread count.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "divcorr/errors.hpp"

namespace divcorr {

inline constexpr std::uint64_t kDefaultMemoryCap = std::uint64_t(2) << 30;  // 2 GiB
inline constexpr std::size_t kDefaultSegmentSize = std::size_t(1) << 22;
inline constexpr std::uint64_t kMaxSieveLimit = 1'000'000'000;

// Parses a byte count with an optional K/M/G suffix (powers of 1024).
inline std::uint64_t parse_byte_count(const std::string& text) {
  if (text.empty()) throw contract_error("empty byte count");
  std::size_t pos = 0;
  unsigned long long base = 0;
  try {
    base = std::stoull(text, &pos);
  } catch (const std::exception&) {
    throw contract_error("invalid byte count: " + text);
  }
  std::uint64_t scale = 1;
  if (pos < text.size()) {
    switch (text[pos]) {
      case 'k': case 'K': scale = 1ull << 10; break;
      case 'm': case 'M': scale = 1ull << 20; break;
      case 'g': case 'G': scale = 1ull << 30; break;
      default: throw contract_error("invalid byte count suffix: " + text);
    }
    if (pos + 1 != text.size()) throw contract_error("invalid byte count: " + text);
  }
  return std::uint64_t(base) * scale;
}

// DIVCORR_MEMCAP overrides the default cap.
inline std::uint64_t default_memory_cap() {
  if (const char* env = std::getenv("DIVCORR_MEMCAP"); env != nullptr && *env != '\0') {
    return parse_byte_count(env);
  }
  return kDefaultMemoryCap;
}

struct SieveConfig {
  std::uint64_t memory_cap = default_memory_cap();
  std::size_t segment_size = kDefaultSegmentSize;
  unsigned threads = 1;
};

namespace detail {

inline void require_budget(std::uint64_t bytes, const SieveConfig& cfg, const char* what) {
  if (bytes > cfg.memory_cap) {
    throw resource_error(std::string(what) + " needs " + std::to_string(bytes) +
                         " bytes, above memory cap of " + std::to_string(cfg.memory_cap));
  }
}

inline void require_limit(std::uint64_t n) {
  if (n < 1) throw range_error("sieve limit must be at least 1");
  if (n > kMaxSieveLimit) throw range_error("sieve limit above 10^9 is not supported");
}

inline std::uint32_t isqrt(std::uint64_t n) {
  auto r = std::uint64_t(std::sqrt(double(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return std::uint32_t(r);
}

// Primes up to `limit` by plain Eratosthenes; used to seed segmented passes.
inline std::vector<std::uint32_t> small_primes(std::uint32_t limit) {
  std::vector<std::uint32_t> primes;
  if (limit < 2) return primes;
  std::vector<bool> composite(limit + 1, false);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(std::uint32_t(i));
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return primes;
}

// Runs body(lo, hi) over [1, n] in segments, striping segments across threads.
template <class Body>
void for_each_segment(std::uint64_t n, std::size_t segment_size, unsigned threads, Body body) {
  if (segment_size == 0) throw contract_error("segment size must be positive");
  const std::uint64_t segments = (n + segment_size - 1) / segment_size;
  auto worker = [&](unsigned tid, unsigned stride) {
    for (std::uint64_t s = tid; s < segments; s += stride) {
      const std::uint64_t lo = 1 + s * segment_size;
      const std::uint64_t hi = std::min<std::uint64_t>(n, lo + segment_size - 1);
      body(lo, hi);
    }
  };
  const unsigned count = std::max(1u, std::min<unsigned>(threads, unsigned(segments)));
  if (count == 1) {
    worker(0, 1);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(count);
  for (unsigned t = 0; t < count; ++t) pool.emplace_back(worker, t, count);
  for (auto& th : pool) th.join();
}

}  // namespace detail

// spf(1) = 1; for n >= 2 the smallest prime dividing n.
class SpfTable {
 public:
  SpfTable() = default;
  SpfTable(std::uint64_t limit, std::vector<std::uint32_t> spf) : limit_(limit), spf_(std::move(spf)) {}

  std::uint64_t limit() const noexcept { return limit_; }

  std::uint32_t operator[](std::uint64_t n) const noexcept { return spf_[n]; }

  std::uint32_t at(std::uint64_t n) const {
    if (n == 0 || n > limit_) throw range_error("spf index " + std::to_string(n) + " outside [1, " + std::to_string(limit_) + "]");
    return spf_[n];
  }

  // Entries 1..limit; element 0 of the backing store is unused.
  std::span<const std::uint32_t> values() const noexcept {
    return std::span<const std::uint32_t>(spf_).subspan(1);
  }

  bool operator==(const SpfTable&) const = default;

 private:
  std::uint64_t limit_ = 0;
  std::vector<std::uint32_t> spf_;
};

class DivisorTable {
 public:
  DivisorTable() = default;
  DivisorTable(std::uint64_t limit, std::vector<std::uint32_t> d) : limit_(limit), d_(std::move(d)) {}

  std::uint64_t limit() const noexcept { return limit_; }
  std::uint32_t operator[](std::uint64_t n) const noexcept { return d_[n]; }
  std::uint32_t at(std::uint64_t n) const {
    if (n == 0 || n > limit_) throw range_error("divisor table index " + std::to_string(n) + " outside [1, " + std::to_string(limit_) + "]");
    return d_[n];
  }
  std::span<const std::uint32_t> values() const noexcept {
    return std::span<const std::uint32_t>(d_).subspan(1);
  }

  bool operator==(const DivisorTable&) const = default;

 private:
  std::uint64_t limit_ = 0;
  std::vector<std::uint32_t> d_;
};

// values(n) = d(n(n+v)) for 1 <= n <= limit.
class ShiftedProductTable {
 public:
  ShiftedProductTable() = default;
  ShiftedProductTable(std::uint64_t limit, std::uint64_t shift, std::vector<std::uint32_t> d)
      : limit_(limit), shift_(shift), d_(std::move(d)) {}

  std::uint64_t limit() const noexcept { return limit_; }
  std::uint64_t shift() const noexcept { return shift_; }
  std::uint32_t operator[](std::uint64_t n) const noexcept { return d_[n]; }
  std::uint32_t at(std::uint64_t n) const {
    if (n == 0 || n > limit_) throw range_error("shifted table index " + std::to_string(n) + " outside [1, " + std::to_string(limit_) + "]");
    return d_[n];
  }
  std::span<const std::uint32_t> values() const noexcept {
    return std::span<const std::uint32_t>(d_).subspan(1);
  }

  bool operator==(const ShiftedProductTable&) const = default;

 private:
  std::uint64_t limit_ = 0;
  std::uint64_t shift_ = 0;
  std::vector<std::uint32_t> d_;
};

// d(ab) from the smallest-prime-factor chains of a and b. Both chains yield
// primes in increasing order, so the merge is a two-pointer walk.
inline std::uint64_t divisor_count_of_product(std::uint64_t a, std::uint64_t b, const SpfTable& spf) {
  std::uint64_t result = 1;
  std::uint32_t pa = a > 1 ? spf[a] : 0;
  std::uint32_t pb = b > 1 ? spf[b] : 0;
  while (pa != 0 || pb != 0) {
    std::uint32_t p;
    if (pa == 0) p = pb;
    else if (pb == 0) p = pa;
    else p = std::min(pa, pb);
    std::uint64_t e = 0;
    if (pa == p) {
      while (a % p == 0) { a /= p; ++e; }
      pa = a > 1 ? spf[a] : 0;
    }
    if (pb == p) {
      while (b % p == 0) { b /= p; ++e; }
      pb = b > 1 ? spf[b] : 0;
    }
    result *= e + 1;
  }
  return result;
}

// Linear sieve over [1, n].
inline SpfTable build_spf_monolithic(std::uint64_t n, const SieveConfig& cfg = {}) {
  detail::require_limit(n);
  detail::require_budget((n + 1) * sizeof(std::uint32_t), cfg, "spf table");
  std::vector<std::uint32_t> spf(n + 1, 0);
  std::vector<std::uint32_t> primes;
  spf[1] = 1;
  for (std::uint64_t i = 2; i <= n; ++i) {
    if (spf[i] == 0) {
      spf[i] = std::uint32_t(i);
      primes.push_back(std::uint32_t(i));
    }
    for (std::uint32_t p : primes) {
      if (p > spf[i] || i * p > n) break;
      spf[i * p] = p;
    }
  }
  return SpfTable(n, std::move(spf));
}

inline SpfTable build_spf_segmented(std::uint64_t n, const SieveConfig& cfg = {}) {
  detail::require_limit(n);
  detail::require_budget((n + 1) * sizeof(std::uint32_t), cfg, "spf table");
  std::vector<std::uint32_t> spf(n + 1, 0);
  const auto primes = detail::small_primes(detail::isqrt(n));
  detail::for_each_segment(n, cfg.segment_size, cfg.threads, [&](std::uint64_t lo, std::uint64_t hi) {
    for (std::uint32_t p : primes) {
      const std::uint64_t pp = std::uint64_t(p) * p;
      if (pp > hi) break;
      std::uint64_t start = std::max(pp, (lo + p - 1) / p * p);
      for (std::uint64_t m = start; m <= hi; m += p) {
        if (spf[m] == 0) spf[m] = p;
      }
    }
    for (std::uint64_t m = lo; m <= hi; ++m) {
      if (spf[m] == 0) spf[m] = std::uint32_t(m);
    }
  });
  return SpfTable(n, std::move(spf));
}

inline SpfTable build_spf(std::uint64_t n, const SieveConfig& cfg = {}) {
  return n <= cfg.segment_size ? build_spf_monolithic(n, cfg) : build_spf_segmented(n, cfg);
}

// Linear sieve carrying the exponent of the smallest prime:
// d(i p) = d(i) / (e+1) * (e+2) when p = spf(i), else 2 d(i).
inline DivisorTable build_divisor_table_monolithic(std::uint64_t n, const SieveConfig& cfg = {}) {
  detail::require_limit(n);
  detail::require_budget((n + 1) * (2 * sizeof(std::uint32_t) + 1), cfg, "divisor table");
  std::vector<std::uint32_t> d(n + 1, 0);
  std::vector<std::uint8_t> exp(n + 1, 0);
  std::vector<std::uint32_t> primes;
  d[1] = 1;
  for (std::uint64_t i = 2; i <= n; ++i) {
    if (d[i] == 0) {
      d[i] = 2;
      exp[i] = 1;
      primes.push_back(std::uint32_t(i));
    }
    for (std::uint32_t p : primes) {
      const std::uint64_t m = i * p;
      if (m > n) break;
      if (i % p == 0) {
        exp[m] = std::uint8_t(exp[i] + 1);
        d[m] = d[i] / (exp[i] + 1u) * (exp[i] + 2u);
        break;
      }
      exp[m] = 1;
      d[m] = d[i] * 2;
    }
  }
  return DivisorTable(n, std::move(d));
}

// Per segment: divide out each prime <= sqrt(n), multiplying (e+1) into the
// count; a cofactor > 1 left over is a single large prime.
inline DivisorTable build_divisor_table_segmented(std::uint64_t n, const SieveConfig& cfg = {}) {
  detail::require_limit(n);
  const std::uint64_t scratch = std::uint64_t(std::min<std::uint64_t>(cfg.segment_size, n)) *
                                sizeof(std::uint32_t) * std::max(1u, cfg.threads);
  detail::require_budget((n + 1) * sizeof(std::uint32_t) + scratch, cfg, "divisor table");
  std::vector<std::uint32_t> d(n + 1, 0);
  const auto primes = detail::small_primes(detail::isqrt(n));
  detail::for_each_segment(n, cfg.segment_size, cfg.threads, [&](std::uint64_t lo, std::uint64_t hi) {
    std::vector<std::uint32_t> rest(hi - lo + 1);
    for (std::uint64_t m = lo; m <= hi; ++m) {
      rest[m - lo] = std::uint32_t(m);
      d[m] = 1;
    }
    for (std::uint32_t p : primes) {
      if (p > hi) break;
      for (std::uint64_t m = (lo + p - 1) / p * p; m <= hi; m += p) {
        std::uint32_t& r = rest[m - lo];
        std::uint32_t e = 0;
        while (r % p == 0) {
          r /= p;
          ++e;
        }
        d[m] *= e + 1;
      }
    }
    for (std::uint64_t m = lo; m <= hi; ++m) {
      if (rest[m - lo] > 1) d[m] *= 2;
    }
  });
  return DivisorTable(n, std::move(d));
}

inline DivisorTable build_divisor_table(std::uint64_t n, const SieveConfig& cfg = {}) {
  return n <= cfg.segment_size ? build_divisor_table_monolithic(n, cfg)
                               : build_divisor_table_segmented(n, cfg);
}

// Primes common to n and n+v divide v, so the merge only ever combines
// exponents of primes dividing v; everything else multiplies through.
inline ShiftedProductTable build_shifted_product_table(std::uint64_t n, std::uint64_t v, const SpfTable& spf,
                                                       const SieveConfig& cfg = {}) {
  if (n < 1) throw range_error("shifted table limit must be at least 1");
  if (v < 1) throw range_error("shift must be positive");
  if (n + v > spf.limit()) {
    throw range_error("n + v = " + std::to_string(n + v) + " exceeds spf limit " + std::to_string(spf.limit()));
  }
  detail::require_budget((n + 1) * sizeof(std::uint32_t), cfg, "shifted product table");
  std::vector<std::uint32_t> values(n + 1, 0);
  detail::for_each_segment(n, cfg.segment_size, cfg.threads, [&](std::uint64_t lo, std::uint64_t hi) {
    for (std::uint64_t m = lo; m <= hi; ++m) {
      values[m] = std::uint32_t(divisor_count_of_product(m, m + v, spf));
    }
  });
  return ShiftedProductTable(n, v, std::move(values));
}

inline ShiftedProductTable build_shifted_product_table(std::uint64_t n, std::uint64_t v, const SieveConfig& cfg = {}) {
  if (v < 1) throw range_error("shift must be positive");
  if (n < 1) throw range_error("shifted table limit must be at least 1");
  const SpfTable spf = build_spf(n + v, cfg);
  return build_shifted_product_table(n, v, spf, cfg);
}

}  // namespace divcorr
