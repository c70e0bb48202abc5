#pragma once

// Exact correlation sums and the divisor-sum transforms relating them:
//
//   sum_{n<=x} f(n) f(n+v)  =  sum_{e|v} g(e)      sum_{n<=x/e} f(n(n+v/e))
//   sum_{n<=x} f(n(n+v))    =  sum_{e|v} mu(e)g(e) sum_{n<=x/e} f(n) f(n+v/e)
//
// With f = d and g = 1 these connect sum d(n)d(n+v) and sum d(n(n+v)).
// Inner bounds x/e are floored; all accumulation is exact.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "divcorr/arith.hpp"
#include "divcorr/errors.hpp"
#include "divcorr/int128.hpp"
#include "divcorr/multiplicative.hpp"
#include "divcorr/sieve.hpp"

namespace divcorr {

enum class CorrelationKind { dd, dpoly, ff, fpoly };

inline std::string to_string(CorrelationKind kind) {
  switch (kind) {
    case CorrelationKind::dd: return "dd";
    case CorrelationKind::dpoly: return "dpoly";
    case CorrelationKind::ff: return "ff";
    case CorrelationKind::fpoly: return "fpoly";
  }
  return "?";
}

template <class T>
struct CorrelationSum {
  CorrelationKind kind;
  std::uint64_t x;
  std::uint64_t v;
  T value;
  std::string spec_name;
};

enum class TransformDirection { corr_from_poly, poly_from_corr };

namespace detail {

inline void require_shift(std::uint64_t v) {
  if (v == 0) throw range_error("shift v must be positive");
}

inline void require_cover(std::uint64_t needed, std::uint64_t limit, const char* what) {
  if (needed > limit) {
    throw range_error(std::string(what) + " covers [1, " + std::to_string(limit) + "] but " +
                      std::to_string(needed) + " is needed");
  }
}

}  // namespace detail

inline CorrelationSum<int128> sum_dd(std::uint64_t x, std::uint64_t v, const DivisorTable& table) {
  detail::require_shift(v);
  if (x > 0) detail::require_cover(x + v, table.limit(), "divisor table");
  int128 total = 0;
  for (std::uint64_t n = 1; n <= x; ++n) total += int128(std::uint64_t(table[n]) * table[n + v]);
  return {CorrelationKind::dd, x, v, total, "d"};
}

inline CorrelationSum<int128> sum_dpoly(std::uint64_t x, std::uint64_t v, const ShiftedProductTable& table) {
  detail::require_shift(v);
  if (table.shift() != v) {
    throw range_error("shifted table has shift " + std::to_string(table.shift()) + ", asked for " + std::to_string(v));
  }
  if (x > 0) detail::require_cover(x, table.limit(), "shifted product table");
  int128 total = 0;
  for (std::uint64_t n = 1; n <= x; ++n) total += table[n];
  return {CorrelationKind::dpoly, x, v, total, "d"};
}

inline CorrelationSum<int128> sum_dpoly(std::uint64_t x, std::uint64_t v, const SpfTable& spf) {
  detail::require_shift(v);
  if (x > 0) detail::require_cover(x + v, spf.limit(), "spf table");
  int128 total = 0;
  for (std::uint64_t n = 1; n <= x; ++n) total += divisor_count_of_product(n, n + v, spf);
  return {CorrelationKind::dpoly, x, v, total, "d"};
}

// Running sums S[x] = sum_{n<=x} d(n)d(n+v) for x = 0..xmax.
inline std::vector<int128> prefix_dd(std::uint64_t xmax, std::uint64_t v, const DivisorTable& table) {
  detail::require_shift(v);
  if (xmax > 0) detail::require_cover(xmax + v, table.limit(), "divisor table");
  std::vector<int128> s(xmax + 1, 0);
  for (std::uint64_t n = 1; n <= xmax; ++n) s[n] = s[n - 1] + int128(std::uint64_t(table[n]) * table[n + v]);
  return s;
}

inline std::vector<int128> prefix_dpoly(std::uint64_t xmax, std::uint64_t v, const SpfTable& spf) {
  detail::require_shift(v);
  if (xmax > 0) detail::require_cover(xmax + v, spf.limit(), "spf table");
  std::vector<int128> s(xmax + 1, 0);
  for (std::uint64_t n = 1; n <= xmax; ++n) s[n] = s[n - 1] + int128(divisor_count_of_product(n, n + v, spf));
  return s;
}

// sum_{e|v} sum_{n <= x/e} d(n(n + v/e)); equals sum_dd(x, v).
inline CorrelationSum<int128> dd_via_lemma(std::uint64_t x, std::uint64_t v, const SpfTable& spf) {
  detail::require_shift(v);
  int128 total = 0;
  for (std::uint64_t e : divisor_values(v)) total += sum_dpoly(x / e, v / e, spf).value;
  return {CorrelationKind::dd, x, v, total, "d"};
}

// sum_{e|v} mu(e) sum_{n <= x/e} d(n)d(n + v/e); equals sum_dpoly(x, v).
inline CorrelationSum<int128> dpoly_via_lemma(std::uint64_t x, std::uint64_t v, const DivisorTable& table) {
  detail::require_shift(v);
  int128 total = 0;
  for (std::uint64_t e : divisor_values(v)) {
    const int m = mobius(e);
    if (m != 0) total += m * sum_dd(x / e, v / e, table).value;
  }
  return {CorrelationKind::dpoly, x, v, total, "d"};
}

// sum_{n<=x} f(n) f(n+v), in the value type of f.
template <class T>
CorrelationSum<T> sum_f_corr(const MultiplicativeSpec<T>& spec, std::uint64_t x, std::uint64_t v, const SpfTable& spf) {
  using ops = value_ops<T>;
  detail::require_shift(v);
  if (x > 0) detail::require_cover(x + v, spf.limit(), "spf table");
  T total(0);
  for (std::uint64_t n = 1; n <= x; ++n) {
    total = ops::add(total, ops::mul(eval_mult(spec, factorize(n, spf)), eval_mult(spec, factorize(n + v, spf))));
  }
  return {CorrelationKind::ff, x, v, total, spec.name};
}

// sum_{n<=x} f(n(n+v)), factorizing the product by merging n and n+v.
template <class T>
CorrelationSum<T> sum_f_poly(const MultiplicativeSpec<T>& spec, std::uint64_t x, std::uint64_t v, const SpfTable& spf) {
  using ops = value_ops<T>;
  detail::require_shift(v);
  if (x > 0) detail::require_cover(x + v, spf.limit(), "spf table");
  T total(0);
  for (std::uint64_t n = 1; n <= x; ++n) {
    total = ops::add(total, eval_mult(spec, factorize(n, spf) * factorize(n + v, spf)));
  }
  return {CorrelationKind::fpoly, x, v, total, spec.name};
}

// Applies the g-weighted (corr_from_poly) or mu*g-weighted (poly_from_corr)
// divisor transform to an arbitrary sum F(x', v'). The two directions are
// mutually inverse because g * (mu g) is the Dirichlet identity.
template <class T, class SumFn>
T divisor_transform(const MultiplicativeSpec<T>& spec, std::uint64_t x, std::uint64_t v, TransformDirection direction,
                    SumFn&& inner) {
  using ops = value_ops<T>;
  if (!spec.has_companion()) throw contract_error("transform needs a companion g on spec '" + spec.name + "'");
  detail::require_shift(v);
  T total(0);
  for (const auto& e : divisors(factorize_trial(v))) {
    T weight = eval_companion(spec, e.factors);
    if (direction == TransformDirection::poly_from_corr) {
      const int m = mobius(e.factors);
      if (m == 0) continue;
      if (m < 0) weight = ops::sub(T(0), weight);
    }
    total = ops::add(total, ops::mul(weight, static_cast<T>(inner(x / e.value, v / e.value))));
  }
  return total;
}

// corr_from_poly rebuilds sum f(n)f(n+v) from the f(n(n+v)) sums;
// poly_from_corr rebuilds sum f(n(n+v)) from the f(n)f(n+v) sums.
template <class T>
CorrelationSum<T> f_transform(const MultiplicativeSpec<T>& spec, std::uint64_t x, std::uint64_t v,
                              TransformDirection direction, const SpfTable& spf) {
  if (direction == TransformDirection::corr_from_poly) {
    const T value = divisor_transform(spec, x, v, direction, [&](std::uint64_t xi, std::uint64_t vi) {
      return sum_f_poly(spec, xi, vi, spf).value;
    });
    return {CorrelationKind::ff, x, v, value, spec.name};
  }
  const T value = divisor_transform(spec, x, v, direction, [&](std::uint64_t xi, std::uint64_t vi) {
    return sum_f_corr(spec, xi, vi, spf).value;
  });
  return {CorrelationKind::fpoly, x, v, value, spec.name};
}

}  // namespace divcorr
