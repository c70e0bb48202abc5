#pragma once

// Multiplicative functions described by their prime-power values, optionally
// paired with a completely multiplicative companion g such that
//
//   f(p^{n+1}) = f(p) f(p^n) - g(p) f(p^{n-1}).
//
// d (g = 1), sigma_alpha (g(p) = p^alpha) and Ramanujan tau (g(p) = p^11) are
// the stock examples. For these, f(a) f(b) = sum_{e | gcd(a,b)} g(e) f(ab/e^2).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <string>
#include <type_traits>

#include "divcorr/arith.hpp"
#include "divcorr/errors.hpp"
#include "divcorr/int128.hpp"

namespace divcorr {

// Arithmetic on f's value type: checked for exact integers, plain for binary64.
template <class T>
struct value_ops;

template <>
struct value_ops<int128> {
  static constexpr bool exact = true;
  static int128 add(int128 a, int128 b) { return checked_add(a, b); }
  static int128 sub(int128 a, int128 b) { return checked_sub(a, b); }
  static int128 mul(int128 a, int128 b) { return checked_mul(a, b); }
  static bool equal(int128 a, int128 b) { return a == b; }
  static std::string str(int128 a) { return to_string(a); }
};

template <>
struct value_ops<double> {
  static constexpr bool exact = false;
  static double add(double a, double b) { return a + b; }
  static double sub(double a, double b) { return a - b; }
  static double mul(double a, double b) { return a * b; }
  static bool equal(double a, double b) {
    return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
  }
  static std::string str(double a) { return std::to_string(a); }
};

template <class T>
struct MultiplicativeSpec {
  using value_type = T;

  std::string name;
  // f(p^k) for k >= 1. May throw evaluation_error where undefined.
  std::function<T(std::uint64_t p, unsigned k)> prime_power_value;
  // g(p); empty when f has no recurrence companion.
  std::function<T(std::uint64_t p)> companion_g;

  bool has_companion() const noexcept { return static_cast<bool>(companion_g); }

  T at_prime_power(std::uint64_t p, unsigned k) const {
    if (k == 0) return T(1);
    if (!prime_power_value) throw evaluation_error("spec '" + name + "' has no prime-power rule");
    return prime_power_value(p, k);
  }

  T g_at_prime(std::uint64_t p) const {
    if (!companion_g) throw contract_error("spec '" + name + "' has no companion g");
    return companion_g(p);
  }
};

using ExactSpec = MultiplicativeSpec<int128>;
using RealSpec = MultiplicativeSpec<double>;

template <class T>
T eval_mult(const MultiplicativeSpec<T>& spec, const Factorization& f) {
  T r(1);
  for (const auto& [p, e] : f) r = value_ops<T>::mul(r, spec.at_prime_power(p, e));
  return r;
}

// g extended completely multiplicatively: g(prod p^e) = prod g(p)^e.
template <class T>
T eval_companion(const MultiplicativeSpec<T>& spec, const Factorization& f) {
  T r(1);
  for (const auto& [p, e] : f) {
    const T gp = spec.g_at_prime(p);
    for (unsigned i = 0; i < e; ++i) r = value_ops<T>::mul(r, gp);
  }
  return r;
}

// f(p^k) from f(p) and g(p) by iterating the three-term recurrence.
template <class T>
T chebyshev_extend(T f_p, T g_p, unsigned k) {
  using ops = value_ops<T>;
  T prev(1);  // f(p^0)
  if (k == 0) return prev;
  T cur = f_p;
  for (unsigned n = 1; n < k; ++n) {
    T next = ops::sub(ops::mul(f_p, cur), ops::mul(g_p, prev));
    prev = cur;
    cur = next;
  }
  return cur;
}

// Checks the recurrence at prime p for n = 1 .. max_n.
template <class T>
bool satisfies_recurrence(const MultiplicativeSpec<T>& spec, std::uint64_t p, unsigned max_n) {
  using ops = value_ops<T>;
  const T fp = spec.at_prime_power(p, 1);
  const T gp = spec.g_at_prime(p);
  for (unsigned n = 1; n <= max_n; ++n) {
    const T expected = ops::sub(ops::mul(fp, spec.at_prime_power(p, n)), ops::mul(gp, spec.at_prime_power(p, n - 1)));
    if (!ops::equal(spec.at_prime_power(p, n + 1), expected)) return false;
  }
  return true;
}

template <class T>
struct IdentityCheck {
  bool holds;
  T lhs;
  T rhs;
};

// sum_{m=0}^{beta} g(p)^m f(p^{alpha+beta-2m}) against f(p^alpha) f(p^beta),
// for 0 <= beta <= alpha, with prime-power values generated by the recurrence.
// With g = 1 this is the plain sum over m.
template <class T>
IdentityCheck<T> induction_identity_check(const MultiplicativeSpec<T>& spec, std::uint64_t p, unsigned alpha,
                                          unsigned beta) {
  using ops = value_ops<T>;
  if (beta > alpha) throw contract_error("induction identity needs beta <= alpha");
  const T fp = spec.at_prime_power(p, 1);
  const T gp = spec.g_at_prime(p);
  T lhs(0);
  T gpow(1);
  for (unsigned m = 0; m <= beta; ++m) {
    lhs = ops::add(lhs, ops::mul(gpow, chebyshev_extend(fp, gp, alpha + beta - 2 * m)));
    gpow = ops::mul(gpow, gp);
  }
  const T rhs = ops::mul(chebyshev_extend(fp, gp, alpha), chebyshev_extend(fp, gp, beta));
  return {ops::equal(lhs, rhs), lhs, rhs};
}

// f(a) f(b) against sum_{e | gcd(a,b)} g(e) f(ab / e^2).
template <class T>
IdentityCheck<T> convolution_identity_check(const MultiplicativeSpec<T>& spec, const Factorization& fa,
                                            const Factorization& fb) {
  using ops = value_ops<T>;
  if (!spec.has_companion()) throw contract_error("convolution identity needs a companion g on spec '" + spec.name + "'");
  const T lhs = ops::mul(eval_mult(spec, fa), eval_mult(spec, fb));

  // gcd(a, b) as a factorization
  std::vector<PrimePower> common;
  {
    auto ia = fa.begin();
    auto ib = fb.begin();
    while (ia != fa.end() && ib != fb.end()) {
      if (ia->prime < ib->prime) ++ia;
      else if (ib->prime < ia->prime) ++ib;
      else {
        common.push_back({ia->prime, std::min(ia->exponent, ib->exponent)});
        ++ia;
        ++ib;
      }
    }
  }
  const Factorization gcd(std::move(common));
  const Factorization product = fa * fb;

  T rhs(0);
  for (const auto& e : divisors(gcd)) {
    // ab / e^2: subtract twice e's exponents from the product's.
    std::vector<PrimePower> quotient;
    auto ie = e.factors.begin();
    for (const auto& [p, k] : product) {
      unsigned reduced = k;
      if (ie != e.factors.end() && ie->prime == p) {
        reduced -= 2 * ie->exponent;
        ++ie;
      }
      if (reduced > 0) quotient.push_back({p, reduced});
    }
    rhs = ops::add(rhs, ops::mul(eval_companion(spec, e.factors), eval_mult(spec, Factorization(std::move(quotient)))));
  }
  return {ops::equal(lhs, rhs), lhs, rhs};
}

template <class T>
IdentityCheck<T> convolution_identity_check(const MultiplicativeSpec<T>& spec, std::uint64_t a, std::uint64_t b,
                                            const SpfTable& spf) {
  return convolution_identity_check(spec, factorize(a, spf), factorize(b, spf));
}

template <class T>
IdentityCheck<T> convolution_identity_check(const MultiplicativeSpec<T>& spec, std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) throw range_error("convolution identity needs positive arguments");
  return convolution_identity_check(spec, factorize_trial(a), factorize_trial(b));
}

inline ExactSpec divisor_spec() {
  return ExactSpec{
      "d",
      [](std::uint64_t, unsigned k) { return int128(k + 1); },
      [](std::uint64_t) { return int128(1); },
  };
}

// sigma_alpha for integer alpha >= 0, exact, with g(p) = p^alpha.
inline ExactSpec sigma_spec(unsigned alpha) {
  return ExactSpec{
      "sigma_" + std::to_string(alpha),
      [alpha](std::uint64_t p, unsigned k) { return sigma_pow(alpha, Factorization({{p, k}})); },
      [alpha](std::uint64_t p) { return checked_pow(int128(p), alpha); },
  };
}

inline RealSpec sigma_real_spec(double alpha) {
  return RealSpec{
      "sigma_" + std::to_string(alpha),
      [alpha](std::uint64_t p, unsigned k) { return sigma_pow(alpha, Factorization({{p, k}})); },
      [alpha](std::uint64_t p) { return std::pow(double(p), alpha); },
  };
}

inline ExactSpec mobius_spec() {
  return ExactSpec{
      "mu",
      [](std::uint64_t, unsigned k) { return int128(k == 1 ? -1 : 0); },
      {},
  };
}

}  // namespace divcorr
