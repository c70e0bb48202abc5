#pragma once

// Factorizations and the classical arithmetic functions evaluated on them:
// mu, d, sigma_alpha, sigma_{-1}^{(k)}, and the generalized von Mangoldt Lambda_k.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "divcorr/errors.hpp"
#include "divcorr/int128.hpp"
#include "divcorr/sieve.hpp"

namespace divcorr {

struct PrimePower {
  std::uint64_t prime;
  unsigned exponent;

  bool operator==(const PrimePower&) const = default;
};

// Primes strictly increasing, exponents >= 1; the integer 1 is the empty list.
class Factorization {
 public:
  Factorization() = default;

  // Validates ordering and exponents; does not test primality.
  explicit Factorization(std::vector<PrimePower> entries) : entries_(std::move(entries)) {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      if (entries_[i].exponent == 0) throw contract_error("factorization exponent must be >= 1");
      if (entries_[i].prime < 2) throw contract_error("factorization prime must be >= 2");
      if (i > 0 && entries_[i - 1].prime >= entries_[i].prime) {
        throw contract_error("factorization primes must be strictly increasing");
      }
    }
  }

  const std::vector<PrimePower>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  auto begin() const noexcept { return entries_.begin(); }
  auto end() const noexcept { return entries_.end(); }

  // The integer this factorization represents (checked).
  int128 value() const {
    int128 r = 1;
    for (const auto& [p, e] : entries_) r = checked_mul(r, checked_pow(int128(p), e));
    return r;
  }

  // Product of two factorizations: exponents of shared primes add.
  Factorization operator*(const Factorization& other) const {
    std::vector<PrimePower> out;
    out.reserve(entries_.size() + other.entries_.size());
    auto a = entries_.begin();
    auto b = other.entries_.begin();
    while (a != entries_.end() || b != other.entries_.end()) {
      if (b == other.entries_.end() || (a != entries_.end() && a->prime < b->prime)) {
        out.push_back(*a++);
      } else if (a == entries_.end() || b->prime < a->prime) {
        out.push_back(*b++);
      } else {
        out.push_back({a->prime, a->exponent + b->exponent});
        ++a;
        ++b;
      }
    }
    Factorization f;
    f.entries_ = std::move(out);
    return f;
  }

  bool operator==(const Factorization&) const = default;

 private:
  std::vector<PrimePower> entries_;
};

inline Factorization factorize(std::uint64_t n, const SpfTable& spf) {
  if (n == 0 || n > spf.limit()) {
    throw range_error("cannot factorize " + std::to_string(n) + " with spf limit " + std::to_string(spf.limit()));
  }
  std::vector<PrimePower> entries;
  while (n > 1) {
    const std::uint32_t p = spf[n];
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    entries.push_back({p, e});
  }
  return Factorization(std::move(entries));
}

// Trial division, for scalars outside any table (shifts, small moduli).
inline Factorization factorize_trial(std::uint64_t n) {
  if (n == 0) throw range_error("cannot factorize 0");
  std::vector<PrimePower> entries;
  for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p != 0) continue;
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    entries.push_back({p, e});
  }
  if (n > 1) entries.push_back({n, 1});
  return Factorization(std::move(entries));
}

inline int mobius(const Factorization& f) {
  int sign = 1;
  for (const auto& pe : f) {
    if (pe.exponent >= 2) return 0;
    sign = -sign;
  }
  return sign;
}

inline std::uint64_t divisor_count(const Factorization& f) {
  std::uint64_t r = 1;
  for (const auto& pe : f) r *= pe.exponent + 1;
  return r;
}

// All divisors in no particular order, as (value, factorization) pairs.
struct Divisor {
  std::uint64_t value;
  Factorization factors;
};

inline std::vector<Divisor> divisors(const Factorization& f) {
  std::vector<Divisor> out{{1, Factorization{}}};
  for (const auto& [p, e] : f) {
    const std::size_t existing = out.size();
    std::uint64_t pk = 1;
    for (unsigned k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < existing; ++i) {
        auto entries = out[i].factors.entries();
        entries.push_back({p, k});
        out.push_back({out[i].value * pk, Factorization(std::move(entries))});
      }
    }
  }
  return out;
}

inline std::vector<std::uint64_t> divisor_values(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (const auto& d : divisors(factorize_trial(n))) out.push_back(d.value);
  std::sort(out.begin(), out.end());
  return out;
}

inline int mobius(std::uint64_t n) { return mobius(factorize_trial(n)); }

// sigma_alpha for integer alpha >= 0, exact: prod (p^{alpha(e+1)} - 1) / (p^alpha - 1).
inline int128 sigma_pow(unsigned alpha, const Factorization& f) {
  int128 r = 1;
  for (const auto& [p, e] : f) {
    int128 term;
    if (alpha == 0) {
      term = e + 1;
    } else {
      const int128 q = checked_pow(int128(p), alpha);
      term = 0;
      int128 pk = 1;
      for (unsigned k = 0; k <= e; ++k) {
        term = checked_add(term, pk);
        if (k < e) pk = checked_mul(pk, q);
      }
    }
    r = checked_mul(r, term);
  }
  return r;
}

// sigma_alpha for real alpha, per-prime geometric sums in binary64.
inline double sigma_pow(double alpha, const Factorization& f) {
  double r = 1.0;
  for (const auto& [p, e] : f) {
    const double q = std::pow(double(p), alpha);
    double term = 1.0;
    double pk = 1.0;
    for (unsigned k = 1; k <= e; ++k) {
      pk *= q;
      term += pk;
    }
    r *= term;
  }
  return r;
}

// sum_{d | v} (log d)^k / d; k = 0 gives sigma_{-1}(v).
inline double sigma_log_k(std::uint64_t v, unsigned k) {
  if (v == 0) throw range_error("sigma_log_k needs v >= 1");
  double total = 0.0;
  for (const auto& d : divisors(factorize_trial(v))) {
    total += std::pow(std::log(double(d.value)), int(k)) / double(d.value);
  }
  return total;
}

// Lambda_k(n) = sum_{d | n} mu(d) log^k(n/d), summed over squarefree d only.
inline double von_mangoldt_k(const Factorization& f, unsigned k) {
  const int128 n128 = f.value();
  const auto n = std::uint64_t(n128);
  double total = 0.0;
  const auto& entries = f.entries();
  const std::size_t r = entries.size();
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << r); ++mask) {
    std::uint64_t d = 1;
    int sign = 1;
    for (std::size_t i = 0; i < r; ++i) {
      if (mask & (std::uint64_t(1) << i)) {
        d *= entries[i].prime;
        sign = -sign;
      }
    }
    const double lg = std::log(double(n / d));
    total += sign * std::pow(lg, int(k));
  }
  return total;
}

inline double von_mangoldt_k(std::uint64_t n, unsigned k) {
  if (n == 0) throw range_error("von_mangoldt_k needs n >= 1");
  return von_mangoldt_k(factorize_trial(n), k);
}

}  // namespace divcorr
