#pragma once

// Analytic constants and the asymptotic coefficients built from them.
//
// With K = 4 gamma - 2 - 4 z1 and C = (2 gamma - 1 - 2 z1)^2 + 1 - 4 z2 + 4 z1^2,
// where z1 = zeta'(2)/zeta(2) and z2 = zeta''(2)/zeta(2):
//
//   sum_{n<=x} d(n)d(n+v) ~ (6/pi^2) sigma_{-1}(v) x (log^2 x + c1(v) log x + c2(v))
//     c1 = K - 4 s1,  c2 = C - 2 K s1 + 4 s2,  s_k = sigma_{-1}^{(k)}(v) / sigma_{-1}(v)
//
//   sum_{n<=x} d(n(n+v)) ~ (6/pi^2) x (log^2 x + A1(v) log x + A2(v))
//     A1 = K - 2 sum_{e|v} Lambda(e)/e
//     A2 = C - K sum Lambda(e)/e + 2 sum Lambda(e) log(e)/e + sum Lambda_2(e)/e
//
// All logarithms are natural.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "divcorr/arith.hpp"
#include "divcorr/errors.hpp"

namespace divcorr {

inline constexpr std::uint64_t kDefaultTruncation = 1'000'000;
inline constexpr double kMinPrecisionTarget = 1e-14;
inline constexpr double kDefaultPrecisionTarget = 1e-12;
inline constexpr double kSigmaLambdaTolerance = 1e-10;
inline constexpr double kBinomialTolerance = 1e-10;
inline constexpr double kCoefficientTolerance = 1e-9;

// Neumaier's compensated summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) comp_ += (sum_ - t) + x;
    else comp_ += (x - t) + sum_;
    sum_ = t;
    abs_total_ += std::abs(x);
  }
  double value() const { return sum_ + comp_; }
  double abs_total() const { return abs_total_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
  double abs_total_ = 0.0;
};

struct BoundedValue {
  double value;
  double abs_error_bound;
};

namespace detail {

inline constexpr double kUnitRoundoff = std::numeric_limits<double>::epsilon() / 2;

// m-th derivative at x of f(t) = (log t)^j t^{-s}, tracked as a polynomial in
// log t times t^{-(s+m)}.
inline double log_power_derivative(double x, unsigned j, double s, unsigned m) {
  std::vector<double> coeff(j + 1, 0.0);
  coeff[j] = 1.0;
  double b = s;
  for (unsigned step = 0; step < m; ++step) {
    std::vector<double> next(j + 1, 0.0);
    for (unsigned a = 0; a <= j; ++a) {
      if (coeff[a] == 0.0) continue;
      if (a > 0) next[a - 1] += coeff[a] * a;
      next[a] -= coeff[a] * b;
    }
    coeff = std::move(next);
    b += 1.0;
  }
  const double lg = std::log(x);
  double poly = 0.0;
  for (unsigned a = j + 1; a-- > 0;) poly = poly * lg + coeff[a];
  return poly * std::pow(x, -b);
}

// integral_M^inf (log t)^j t^{-s} dt = M^{1-s} sum_i j!/(j-i)! log^{j-i} M / (s-1)^{i+1}
inline double log_power_tail_integral(double m, unsigned j, double s) {
  const double lg = std::log(m);
  double total = 0.0;
  double falling = 1.0;
  for (unsigned i = 0; i <= j; ++i) {
    total += falling * std::pow(lg, int(j - i)) / std::pow(s - 1.0, int(i + 1));
    falling *= double(j - i);
  }
  return std::pow(m, 1.0 - s) * total;
}

}  // namespace detail

// sum_{n>=1} (log n)^j / n^s for s > 1, i.e. (-1)^j zeta^{(j)}(s): direct sum
// over n < M plus the Euler-Maclaurin tail through the B_4 term. The bound
// covers twice the first omitted (B_6) term plus floating-point rounding.
inline BoundedValue log_power_zeta_sum(double s, unsigned j, std::uint64_t truncation) {
  if (!(s > 1.0)) throw contract_error("log_power_zeta_sum needs s > 1");
  if (truncation < 2) throw contract_error("truncation point must be at least 2");
  CompensatedSum sum;
  for (std::uint64_t n = truncation - 1; n >= 2; --n) {
    const double x = double(n);
    sum.add(std::pow(std::log(x), int(j)) * std::pow(x, -s));
  }
  if (j == 0) sum.add(1.0);
  const double m = double(truncation);
  const double f_m = detail::log_power_derivative(m, j, s, 0);
  const double d1 = detail::log_power_derivative(m, j, s, 1);
  const double d3 = detail::log_power_derivative(m, j, s, 3);
  const double d5 = detail::log_power_derivative(m, j, s, 5);
  const double integral = detail::log_power_tail_integral(m, j, s);
  const double tail = integral + f_m / 2 - d1 / 12 + d3 / 720;
  const double value = sum.value() + tail;
  const double omitted = std::abs(d5) / 30240;
  const double rounding =
      detail::kUnitRoundoff * ((2.0 * j + 4.0) * sum.abs_total() + 4.0 * (std::abs(value) + std::abs(integral)));
  return {value, 2 * omitted + rounding};
}

// gamma = H_M - log M - 1/(2M) + 1/(12 M^2) - 1/(120 M^4), next term 1/(252 M^6).
inline BoundedValue euler_gamma(std::uint64_t truncation) {
  if (truncation < 2) throw contract_error("truncation point must be at least 2");
  CompensatedSum harmonic;
  for (std::uint64_t n = truncation; n >= 1; --n) harmonic.add(1.0 / double(n));
  const double m = double(truncation);
  const double log_m = std::log(m);
  const double value = harmonic.value() - log_m - 1.0 / (2 * m) + 1.0 / (12 * m * m) - 1.0 / (120 * m * m * m * m);
  const double omitted = 1.0 / (252 * std::pow(m, 6));
  const double rounding = detail::kUnitRoundoff * (3.0 * harmonic.abs_total() + 4.0 * log_m + 4.0 * std::abs(value));
  return {value, 2 * omitted + rounding};
}

struct ZetaConstants {
  double gamma;
  double zeta2;
  double zeta_prime_2;
  double zeta_double_prime_2;
  struct {
    double gamma;
    double zeta2;
    double zeta_prime_2;
    double zeta_double_prime_2;
  } abs_error_bound;
  std::uint64_t truncation;

  double log_derivative_ratio() const { return zeta_prime_2 / zeta2; }         // zeta'/zeta(2)
  double second_derivative_ratio() const { return zeta_double_prime_2 / zeta2; }  // zeta''/zeta(2)
  double max_error_bound() const {
    return std::max({abs_error_bound.gamma, abs_error_bound.zeta2, abs_error_bound.zeta_prime_2,
                     abs_error_bound.zeta_double_prime_2});
  }
};

inline ZetaConstants compute_zeta_constants(double precision_target = kDefaultPrecisionTarget,
                                            std::uint64_t truncation = kDefaultTruncation) {
  if (!(precision_target >= kMinPrecisionTarget)) {
    throw contract_error("precision target " + std::to_string(precision_target) + " is below what binary64 supports (1e-14)");
  }
  const BoundedValue g = euler_gamma(truncation);
  const BoundedValue z0 = log_power_zeta_sum(2.0, 0, truncation);
  const BoundedValue z1 = log_power_zeta_sum(2.0, 1, truncation);
  const BoundedValue z2 = log_power_zeta_sum(2.0, 2, truncation);
  ZetaConstants zc{g.value, z0.value, -z1.value, z2.value,
                   {g.abs_error_bound, z0.abs_error_bound, z1.abs_error_bound, z2.abs_error_bound}, truncation};
  if (zc.max_error_bound() > precision_target) {
    throw contract_error("precision target " + std::to_string(precision_target) + " unattainable at truncation " +
                         std::to_string(truncation));
  }
  return zc;
}

// Computed once at the default target and truncation.
inline const ZetaConstants& zeta_constants() {
  static const ZetaConstants cached = compute_zeta_constants();
  return cached;
}

struct AsymptoticCoefficients {
  std::uint64_t v;
  double c1;
  double c2;
  double A1;
  double A2;
};

namespace detail {

inline double k_constant(const ZetaConstants& zc) {
  return 4 * zc.gamma - 2 - 4 * zc.log_derivative_ratio();
}

inline double c_constant(const ZetaConstants& zc) {
  const double z1 = zc.log_derivative_ratio();
  const double z2 = zc.second_derivative_ratio();
  const double h = 2 * zc.gamma - 1 - 2 * z1;
  return h * h + 1 - 4 * z2 + 4 * z1 * z1;
}

}  // namespace detail

struct EstermannCoefficients {
  double c1;
  double c2;
};

inline EstermannCoefficients estermann_c(std::uint64_t v, const ZetaConstants& zc) {
  if (v == 0) throw range_error("estermann_c needs v >= 1");
  const double s0 = sigma_log_k(v, 0);
  const double s1 = sigma_log_k(v, 1) / s0;
  const double s2 = sigma_log_k(v, 2) / s0;
  const double k = detail::k_constant(zc);
  return {k - 4 * s1, detail::c_constant(zc) - 2 * k * s1 + 4 * s2};
}

struct PolyCoefficients {
  double A1;
  double A2;
};

inline PolyCoefficients poly_coefficients(std::uint64_t v, const ZetaConstants& zc) {
  if (v == 0) throw range_error("poly_coefficients needs v >= 1");
  double lambda1 = 0.0;
  double lambda_log = 0.0;
  double lambda2 = 0.0;
  for (std::uint64_t e : divisor_values(v)) {
    const double inv = 1.0 / double(e);
    const double l1 = von_mangoldt_k(e, 1);
    lambda1 += l1 * inv;
    lambda_log += l1 * std::log(double(e)) * inv;
    lambda2 += von_mangoldt_k(e, 2) * inv;
  }
  const double k = detail::k_constant(zc);
  return {k - 2 * lambda1, detail::c_constant(zc) - k * lambda1 + 2 * lambda_log + lambda2};
}

inline AsymptoticCoefficients asymptotic_coefficients(std::uint64_t v, const ZetaConstants& zc) {
  const auto [c1, c2] = estermann_c(v, zc);
  const auto [a1, a2] = poly_coefficients(v, zc);
  return {v, c1, c2, a1, a2};
}

struct IdentityReport {
  double lhs;
  double rhs;
  bool pass;
};

// sum_{e|v} mu(e)/e sigma_{-1}^{(k)}(v/e)  vs  sum_{d|v} Lambda_k(d)/d
inline IdentityReport identity_sigma_lambda(std::uint64_t v, unsigned k) {
  if (v == 0) throw range_error("identity_sigma_lambda needs v >= 1");
  double lhs = 0.0;
  double rhs = 0.0;
  for (std::uint64_t e : divisor_values(v)) {
    const int m = mobius(e);
    if (m != 0) lhs += m / double(e) * sigma_log_k(v / e, k);
    rhs += von_mangoldt_k(e, k) / double(e);
  }
  const bool pass = std::abs(lhs - rhs) <= kSigmaLambdaTolerance * (1 + std::max(std::abs(lhs), std::abs(rhs)));
  return {lhs, rhs, pass};
}

// sum_{k=0}^n C(n,k) sum_{e|v} mu(e)/e sigma_{-1}^{(k)}(v/e) (log e)^{n-k}
// against 1 for n = 0 and 0 for n >= 1.
inline IdentityReport identity_binomial(std::uint64_t v, unsigned n) {
  if (v == 0) throw range_error("identity_binomial needs v >= 1");
  if (n > 4) throw contract_error("identity_binomial supports n <= 4");
  double lhs = 0.0;
  double binom = 1.0;
  for (unsigned k = 0; k <= n; ++k) {
    double inner = 0.0;
    for (std::uint64_t e : divisor_values(v)) {
      const int m = mobius(e);
      if (m == 0) continue;
      inner += m / double(e) * sigma_log_k(v / e, k) * std::pow(std::log(double(e)), int(n - k));
    }
    lhs += binom * inner;
    binom = binom * double(n - k) / double(k + 1);
  }
  const double expected = n == 0 ? 1.0 : 0.0;
  return {lhs, expected, std::abs(lhs - expected) <= kBinomialTolerance * (1 + expected)};
}

struct CoefficientReport {
  IdentityReport a1;      // Mobius combination of c1 vs closed-form A1
  IdentityReport a2;      // Mobius combination of (log^2 e - c1 log e + c2) vs closed-form A2
  IdentityReport helper;  // sum mu/e sigma log^2 e + sum mu/e sigma^{(1)} log e vs -sum Lambda(e) log e / e
  bool pass() const { return a1.pass && a2.pass && helper.pass; }
};

// Feeds the Estermann expansion through the Mobius-inverted shift relation and
// compares with the closed forms for A1, A2. The Mobius combinations carry no
// 6/pi^2 prefactor: that factor is already outside the bracket.
inline CoefficientReport coefficient_consistency(std::uint64_t v, const ZetaConstants& zc) {
  if (v == 0) throw range_error("coefficient_consistency needs v >= 1");
  double a1 = 0.0;
  double a2 = 0.0;
  double helper = 0.0;
  double lambda_log = 0.0;
  for (std::uint64_t e : divisor_values(v)) {
    const double le = std::log(double(e));
    const double l1 = von_mangoldt_k(e, 1);
    lambda_log += l1 * le / double(e);
    const int m = mobius(e);
    if (m == 0) continue;
    const double w = m / double(e) * sigma_log_k(v / e, 0);
    const auto [c1, c2] = estermann_c(v / e, zc);
    a1 += w * (c1 - 2 * le);
    a2 += w * (le * le - c1 * le + c2);
    helper += w * le * le + m / double(e) * sigma_log_k(v / e, 1) * le;
  }
  const auto [t1, t2] = poly_coefficients(v, zc);
  auto report = [](double lhs, double rhs) {
    return IdentityReport{lhs, rhs, std::abs(lhs - rhs) <= kCoefficientTolerance};
  };
  return {report(a1, t1), report(a2, t2), report(helper, -lambda_log)};
}

inline void require_terms(int terms) {
  if (terms < 1 || terms > 3) throw contract_error("main-term truncation must be 1, 2 or 3");
}

// (6/pi^2) sigma_{-1}(v) x (log^2 x + c1 log x + c2), truncated to `terms` terms.
inline double estermann_main(double x, std::uint64_t v, const ZetaConstants& zc, int terms = 3) {
  require_terms(terms);
  if (!(x >= 2)) throw contract_error("main term needs x >= 2");
  const auto [c1, c2] = estermann_c(v, zc);
  const double lg = std::log(x);
  double bracket = lg * lg;
  if (terms >= 2) bracket += c1 * lg;
  if (terms >= 3) bracket += c2;
  return 6 / (std::numbers::pi * std::numbers::pi) * sigma_log_k(v, 0) * x * bracket;
}

// (6/pi^2) x (log^2 x + A1 log x + A2), truncated to `terms` terms.
inline double poly_main(double x, std::uint64_t v, const ZetaConstants& zc, int terms = 3) {
  require_terms(terms);
  if (!(x >= 2)) throw contract_error("main term needs x >= 2");
  const auto [a1, a2] = poly_coefficients(v, zc);
  const double lg = std::log(x);
  double bracket = lg * lg;
  if (terms >= 2) bracket += a1 * lg;
  if (terms >= 3) bracket += a2;
  return 6 / (std::numbers::pi * std::numbers::pi) * x * bracket;
}

// Error term shape O(x^omega log^c x) accompanying sigma_corr_main.
struct SigmaCorrErrorShape {
  double omega;
  int log_power;
};

inline SigmaCorrErrorShape sigma_corr_error_shape(double alpha) {
  if (!(alpha > 0)) throw contract_error("sigma correlation needs alpha > 0");
  const int c = alpha > 1 ? 0 : (alpha < 1 ? 1 : 2);
  return {2 * alpha + 1 - std::min(alpha, 1.0), c};
}

// zeta(alpha+1)^2 / ((2 alpha + 1) zeta(2 alpha + 2)).
inline double sigma_corr_coefficient(double alpha, std::uint64_t truncation = 10'000) {
  if (!(alpha > 0)) throw contract_error("sigma correlation needs alpha > 0");
  const double za = log_power_zeta_sum(alpha + 1, 0, truncation).value;
  const double zb = log_power_zeta_sum(2 * alpha + 2, 0, truncation).value;
  return za * za / zb / (2 * alpha + 1);
}

// sum_{d|v} d^{-2 alpha - 1} sum_{e|d} mu(e) e^alpha
inline double sigma_corr_divisor_factor(std::uint64_t v, double alpha) {
  if (v == 0) throw range_error("sigma correlation needs v >= 1");
  double total = 0.0;
  for (std::uint64_t d : divisor_values(v)) {
    double inner = 0.0;
    for (std::uint64_t e : divisor_values(d)) inner += mobius(e) * std::pow(double(e), alpha);
    total += std::pow(double(d), -2 * alpha - 1) * inner;
  }
  return total;
}

// Main term of sum_{n<=x} sigma_alpha(n(n+v)).
inline double sigma_corr_main(double x, std::uint64_t v, double alpha) {
  if (!(alpha > 0)) throw contract_error("sigma correlation needs alpha > 0");
  return sigma_corr_coefficient(alpha) * std::pow(x, 2 * alpha + 1) * sigma_corr_divisor_factor(v, alpha);
}

}  // namespace divcorr
