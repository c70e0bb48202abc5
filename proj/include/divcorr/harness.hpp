#pragma once

// Verification suites and empirical-vs-asymptotic comparison runs.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "divcorr/arith.hpp"
#include "divcorr/constants.hpp"
#include "divcorr/correlate.hpp"
#include "divcorr/errors.hpp"
#include "divcorr/int128.hpp"
#include "divcorr/multiplicative.hpp"
#include "divcorr/sieve.hpp"
#include "divcorr/tau.hpp"

namespace divcorr {

// ---------------------------------------------------------------------------
// compare
// ---------------------------------------------------------------------------

enum class CompareKind { dd, dpoly, sigma_corr };
enum class OutputFormat { csv, json };

inline std::string to_string(CompareKind kind) {
  switch (kind) {
    case CompareKind::dd: return "dd";
    case CompareKind::dpoly: return "dpoly";
    case CompareKind::sigma_corr: return "sigma_corr";
  }
  return "?";
}

inline CompareKind parse_compare_kind(const std::string& name) {
  if (name == "dd") return CompareKind::dd;
  if (name == "dpoly") return CompareKind::dpoly;
  if (name == "sigma_corr") return CompareKind::sigma_corr;
  throw contract_error("unknown comparison kind: " + name);
}

inline constexpr double kDefaultResidualExponent = 2.0 / 3.0 + 0.05;

struct RunConfig {
  std::vector<std::uint64_t> x_list;
  std::vector<std::uint64_t> v_list;
  CompareKind kind = CompareKind::dpoly;
  std::optional<unsigned> alpha;  // sigma_corr only; integer so the empirical sum stays exact
  int truncation = 3;             // main term the residual is taken against
  double residual_exponent = kDefaultResidualExponent;
  OutputFormat output = OutputFormat::csv;
  SieveConfig sieve;

  void validate() const {
    if (x_list.empty()) throw contract_error("x list is empty");
    if (v_list.empty()) throw contract_error("v list is empty");
    for (auto x : x_list) {
      if (x < 2) throw contract_error("every x must be >= 2");
    }
    for (auto v : v_list) {
      if (v < 1) throw contract_error("every v must be >= 1");
    }
    require_terms(truncation);
    if (!(residual_exponent > 0.5 && residual_exponent < 1.0)) {
      throw contract_error("residual exponent must lie in (0.5, 1)");
    }
    if (kind == CompareKind::sigma_corr && (!alpha || *alpha == 0)) {
      throw contract_error("sigma_corr needs a positive integer alpha");
    }
  }
};

struct ComparisonRow {
  std::string kind;
  std::uint64_t x;
  std::uint64_t v;
  int128 empirical;
  double main1;
  double main2;
  double main3;
  double residual;
  double residual_scaled;

  bool operator==(const ComparisonRow&) const = default;
};

namespace detail {

// sum_{n<=x} sigma_alpha(n(n+v)), exact.
inline int128 sum_sigma_poly(std::uint64_t x, std::uint64_t v, unsigned alpha, const SpfTable& spf) {
  int128 total = 0;
  for (std::uint64_t n = 1; n <= x; ++n) {
    total = checked_add(total, sigma_pow(alpha, factorize(n, spf) * factorize(n + v, spf)));
  }
  return total;
}

template <class Fn>
void parallel_indexed(std::size_t count, unsigned threads, Fn fn) {
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, unsigned(count)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (unsigned t = 0; t < workers; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < count; i += workers) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace detail

// Rows come out v-major, x-minor, in the order the lists were given.
inline std::vector<ComparisonRow> run_compare(const RunConfig& config,
                                              const ZetaConstants& zc = zeta_constants()) {
  config.validate();
  const std::uint64_t xmax = *std::max_element(config.x_list.begin(), config.x_list.end());
  const std::uint64_t vmax = *std::max_element(config.v_list.begin(), config.v_list.end());
  const std::uint64_t reach = xmax + vmax;

  std::optional<DivisorTable> dtab;
  std::optional<SpfTable> spf;
  if (config.kind == CompareKind::dd) dtab = build_divisor_table(reach, config.sieve);
  else spf = build_spf(reach, config.sieve);

  struct Cell {
    std::uint64_t x;
    std::uint64_t v;
  };
  std::vector<Cell> cells;
  for (auto v : config.v_list) {
    for (auto x : config.x_list) cells.push_back({x, v});
  }

  std::vector<ComparisonRow> rows(cells.size());
  detail::parallel_indexed(cells.size(), config.sieve.threads, [&](std::size_t i) {
    const auto [x, v] = cells[i];
    ComparisonRow row{to_string(config.kind), x, v, 0, 0, 0, 0, 0, 0};
    const double xd = double(x);
    switch (config.kind) {
      case CompareKind::dd:
        row.empirical = sum_dd(x, v, *dtab).value;
        row.main1 = estermann_main(xd, v, zc, 1);
        row.main2 = estermann_main(xd, v, zc, 2);
        row.main3 = estermann_main(xd, v, zc, 3);
        break;
      case CompareKind::dpoly:
        row.empirical = sum_dpoly(x, v, *spf).value;
        row.main1 = poly_main(xd, v, zc, 1);
        row.main2 = poly_main(xd, v, zc, 2);
        row.main3 = poly_main(xd, v, zc, 3);
        break;
      case CompareKind::sigma_corr:
        row.empirical = detail::sum_sigma_poly(x, v, *config.alpha, *spf);
        row.main1 = row.main2 = row.main3 = sigma_corr_main(xd, v, double(*config.alpha));
        break;
    }
    const double main = config.truncation == 1 ? row.main1 : (config.truncation == 2 ? row.main2 : row.main3);
    row.residual = double(row.empirical) - main;
    row.residual_scaled = row.residual / std::pow(xd, config.residual_exponent);
    rows[i] = std::move(row);
  });
  return rows;
}

// ---------------------------------------------------------------------------
// emit / parse
// ---------------------------------------------------------------------------

inline constexpr const char* kCsvHeader = "kind,x,v,empirical,main1,main2,main3,residual,residual_scaled";

inline std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

inline std::string emit_csv(const std::vector<ComparisonRow>& rows) {
  std::string out = std::string(kCsvHeader) + "\n";
  for (const auto& r : rows) {
    out += r.kind + "," + std::to_string(r.x) + "," + std::to_string(r.v) + "," + to_string(r.empirical) + "," +
           format_double(r.main1) + "," + format_double(r.main2) + "," + format_double(r.main3) + "," +
           format_double(r.residual) + "," + format_double(r.residual_scaled) + "\n";
  }
  return out;
}

// Written by hand so floats keep exactly 17 significant digits.
inline std::string emit_json(const std::vector<ComparisonRow>& rows) {
  if (rows.empty()) return "[]\n";
  std::string out = "[\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    out += "  {\"kind\": " + nlohmann::json(r.kind).dump() + ", \"x\": \"" + std::to_string(r.x) + "\", \"v\": \"" +
           std::to_string(r.v) + "\", \"empirical\": \"" + to_string(r.empirical) + "\", \"main1\": " +
           format_double(r.main1) + ", \"main2\": " + format_double(r.main2) + ", \"main3\": " + format_double(r.main3) +
           ", \"residual\": " + format_double(r.residual) + ", \"residual_scaled\": " + format_double(r.residual_scaled) +
           "}";
    out += i + 1 < rows.size() ? ",\n" : "\n";
  }
  out += "]\n";
  return out;
}

inline std::string emit(const std::vector<ComparisonRow>& rows, OutputFormat format) {
  return format == OutputFormat::csv ? emit_csv(rows) : emit_json(rows);
}

inline std::vector<ComparisonRow> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw format_error("missing or wrong CSV header");
  std::vector<ComparisonRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    if (f.size() != 9) throw format_error("CSV row has " + std::to_string(f.size()) + " fields, expected 9");
    rows.push_back({f[0], std::stoull(f[1]), std::stoull(f[2]), parse_int128(f[3]), std::stod(f[4]), std::stod(f[5]),
                    std::stod(f[6]), std::stod(f[7]), std::stod(f[8])});
  }
  return rows;
}

inline std::vector<ComparisonRow> parse_json(const std::string& text) {
  const auto doc = nlohmann::json::parse(text);
  if (!doc.is_array()) throw format_error("expected a JSON array");
  std::vector<ComparisonRow> rows;
  for (const auto& o : doc) {
    rows.push_back({o.at("kind").get<std::string>(), std::stoull(o.at("x").get<std::string>()),
                    std::stoull(o.at("v").get<std::string>()), parse_int128(o.at("empirical").get<std::string>()),
                    o.at("main1").get<double>(), o.at("main2").get<double>(), o.at("main3").get<double>(),
                    o.at("residual").get<double>(), o.at("residual_scaled").get<double>()});
  }
  return rows;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

inline const std::vector<std::string>& verify_suite_names() {
  static const std::vector<std::string> names{"lemma1", "lemma2", "induction", "genrec",
                                              "sigma_lambda", "binomial", "coeff_consistency"};
  return names;
}

struct VerifyBounds {
  std::uint64_t xmax = 10'000;
  std::uint64_t vmax = 50;
  SieveConfig sieve;
};

struct SuiteResult {
  std::string name;
  std::uint64_t checks = 0;
  std::uint64_t failures = 0;
  std::string first_counterexample;

  // `describe` is only invoked for the first failure.
  template <class Describe>
  void record(bool ok, Describe&& describe) {
    ++checks;
    if (!ok) {
      if (failures == 0) first_counterexample = describe();
      ++failures;
    }
  }
  bool passed() const { return failures == 0; }
};

struct VerifyReport {
  std::vector<SuiteResult> suites;
  bool passed() const {
    return std::all_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return s.passed(); });
  }
};

namespace detail {

// Both directions of the d(n)d(n+v) <-> d(n(n+v)) transform at every x <= xmax.
inline SuiteResult verify_lemma1(const VerifyBounds& b) {
  SuiteResult r;
  r.name = "lemma1";
  const SpfTable spf = build_spf(b.xmax + b.vmax, b.sieve);
  const DivisorTable dt = build_divisor_table(b.xmax + b.vmax, b.sieve);
  std::vector<std::vector<int128>> dd(b.vmax + 1);
  std::vector<std::vector<int128>> dp(b.vmax + 1);
  for (std::uint64_t w = 1; w <= b.vmax; ++w) {
    dd[w] = prefix_dd(b.xmax, w, dt);
    dp[w] = prefix_dpoly(b.xmax, w, spf);
  }
  for (std::uint64_t v = 1; v <= b.vmax; ++v) {
    const auto divs = divisor_values(v);
    std::vector<int> mu;
    for (auto e : divs) mu.push_back(mobius(e));
    for (std::uint64_t x = 1; x <= b.xmax; ++x) {
      int128 forward = 0;
      int128 backward = 0;
      for (std::size_t i = 0; i < divs.size(); ++i) {
        const auto e = divs[i];
        forward += dp[v / e][x / e];
        backward += mu[i] * dd[v / e][x / e];
      }
      auto where = [&] { return "x=" + std::to_string(x) + " v=" + std::to_string(v); };
      r.record(forward == dd[v][x], [&] { return where() + ": sum d(n)d(n+v)=" + to_string(dd[v][x]) + " transform=" + to_string(forward); });
      r.record(backward == dp[v][x], [&] { return where() + ": sum d(n(n+v))=" + to_string(dp[v][x]) + " transform=" + to_string(backward); });
    }
  }
  return r;
}

// d(n)d(n+v) = sum_{e | gcd(n,v)} d(n(n+v)/e^2)
inline SuiteResult verify_lemma2(const VerifyBounds& b) {
  SuiteResult r;
  r.name = "lemma2";
  const SpfTable spf = build_spf(b.xmax + b.vmax, b.sieve);
  const ExactSpec d = divisor_spec();
  for (std::uint64_t n = 1; n <= b.xmax; ++n) {
    const Factorization fn = factorize(n, spf);
    for (std::uint64_t v = 1; v <= b.vmax; ++v) {
      const auto check = convolution_identity_check(d, fn, factorize(n + v, spf));
      r.record(check.holds, [&] {
        return "n=" + std::to_string(n) + " v=" + std::to_string(v) + ": " + to_string(check.lhs) + " != " +
               to_string(check.rhs);
      });
    }
  }
  return r;
}

inline SuiteResult verify_induction() {
  SuiteResult r;
  r.name = "induction";
  const std::vector<ExactSpec> specs{divisor_spec(), sigma_spec(1)};
  for (const auto& spec : specs) {
    for (std::uint64_t p = 2; p <= 50; ++p) {
      if (factorize_trial(p) != Factorization({{p, 1}})) continue;
      for (unsigned alpha = 0; alpha <= 8; ++alpha) {
        for (unsigned beta = 0; beta <= alpha; ++beta) {
          const auto c = induction_identity_check(spec, p, alpha, beta);
          r.record(c.holds, [&] { return spec.name + " p=" + std::to_string(p) + " alpha=" + std::to_string(alpha) +
                                " beta=" + std::to_string(beta); });
        }
      }
    }
  }
  return r;
}

// g-weighted convolution identity and the three-term recurrence for
// sigma_1, sigma_2 (a, b <= 200) and tau (a, b <= 200 with ab inside the table).
inline SuiteResult verify_genrec() {
  SuiteResult r;
  r.name = "genrec";
  const SpfTable spf = build_spf(200);
  const ExactSpec tau = tau_spec(kTauTableMax);
  struct Case {
    ExactSpec spec;
    std::uint64_t product_limit;
  };
  const std::vector<Case> cases{{sigma_spec(1), 40'000}, {sigma_spec(2), 40'000}, {tau, kTauTableMax}};
  for (const auto& c : cases) {
    for (std::uint64_t a = 1; a <= 200; ++a) {
      for (std::uint64_t b = 1; b <= 200 && a * b <= c.product_limit; ++b) {
        const auto check = convolution_identity_check(c.spec, a, b, spf);
        r.record(check.holds, [&] { return c.spec.name + " a=" + std::to_string(a) + " b=" + std::to_string(b) + ": " +
                                  to_string(check.lhs) + " != " + to_string(check.rhs); });
      }
    }
  }
  for (const auto& spec : {divisor_spec(), sigma_spec(1), sigma_spec(2)}) {
    for (std::uint64_t p : {2, 3, 5, 7, 11, 13, 47}) {
      r.record(satisfies_recurrence(spec, p, 8), [&] { return spec.name + " recurrence at p=" + std::to_string(p); });
    }
  }
  for (std::uint64_t p : {2, 3, 5}) {
    unsigned top = 0;
    for (std::uint64_t pk = p; pk * p <= kTauTableMax; pk *= p) ++top;  // p^(top+1) <= N
    r.record(satisfies_recurrence(tau, p, top), [&] { return "tau recurrence at p=" + std::to_string(p); });
  }
  return r;
}

inline SuiteResult verify_sigma_lambda(const VerifyBounds& b) {
  SuiteResult r;
  r.name = "sigma_lambda";
  for (std::uint64_t v = 1; v <= b.vmax; ++v) {
    for (unsigned k = 0; k <= 3; ++k) {
      const auto rep = identity_sigma_lambda(v, k);
      r.record(rep.pass, [&] { return "v=" + std::to_string(v) + " k=" + std::to_string(k) + ": " + format_double(rep.lhs) +
                             " vs " + format_double(rep.rhs); });
    }
  }
  return r;
}

inline SuiteResult verify_binomial(const VerifyBounds& b) {
  SuiteResult r;
  r.name = "binomial";
  for (std::uint64_t v = 1; v <= b.vmax; ++v) {
    for (unsigned n = 0; n <= 3; ++n) {
      const auto rep = identity_binomial(v, n);
      r.record(rep.pass, [&] { return "v=" + std::to_string(v) + " n=" + std::to_string(n) + ": " + format_double(rep.lhs); });
    }
  }
  return r;
}

inline SuiteResult verify_coefficients(const VerifyBounds& b, const ZetaConstants& zc) {
  SuiteResult r;
  r.name = "coeff_consistency";
  for (std::uint64_t v = 1; v <= b.vmax; ++v) {
    const auto rep = coefficient_consistency(v, zc);
    const std::string where = "v=" + std::to_string(v);
    r.record(rep.a1.pass, [&] { return where + " A1: " + format_double(rep.a1.lhs) + " vs " + format_double(rep.a1.rhs); });
    r.record(rep.a2.pass, [&] { return where + " A2: " + format_double(rep.a2.lhs) + " vs " + format_double(rep.a2.rhs); });
    r.record(rep.helper.pass, [&] { return where + " helper: " + format_double(rep.helper.lhs) + " vs " + format_double(rep.helper.rhs); });
  }
  return r;
}

}  // namespace detail

// Runs the named suites in the order given. Unknown names are a contract error.
inline VerifyReport run_verify(const std::vector<std::string>& suites, const VerifyBounds& bounds = {}) {
  const auto& known = verify_suite_names();
  for (const auto& s : suites) {
    if (std::find(known.begin(), known.end(), s) == known.end()) throw contract_error("unknown suite: " + s);
  }
  if (bounds.xmax < 1 || bounds.vmax < 1) throw contract_error("verify bounds must be positive");
  VerifyReport report;
  for (const auto& s : suites) {
    if (s == "lemma1") report.suites.push_back(detail::verify_lemma1(bounds));
    else if (s == "lemma2") report.suites.push_back(detail::verify_lemma2(bounds));
    else if (s == "induction") report.suites.push_back(detail::verify_induction());
    else if (s == "genrec") report.suites.push_back(detail::verify_genrec());
    else if (s == "sigma_lambda") report.suites.push_back(detail::verify_sigma_lambda(bounds));
    else if (s == "binomial") report.suites.push_back(detail::verify_binomial(bounds));
    else if (s == "coeff_consistency") report.suites.push_back(detail::verify_coefficients(bounds, zeta_constants()));
  }
  return report;
}

}  // namespace divcorr
