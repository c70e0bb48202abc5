#include <random>

#include <gtest/gtest.h>

#include "divcorr/harness.hpp"

namespace divcorr {
namespace {

RunConfig small_config(CompareKind kind) {
  RunConfig cfg;
  cfg.kind = kind;
  cfg.x_list = {1000, 5000};
  cfg.v_list = {1, 2};
  return cfg;
}

TEST(Emit, EmptyInput) {
  EXPECT_EQ(emit_csv({}), std::string(kCsvHeader) + "\n");
  EXPECT_EQ(emit_json({}), "[]\n");
  EXPECT_TRUE(parse_json(emit_json({})).empty());
}

TEST(Emit, OneRowLayout) {
  const ComparisonRow row{"dpoly", 10, 3, parse_int128("123456789012345678901234"), 0.1, 1.0 / 3, -2.5, 1e-300, 7};
  EXPECT_EQ(emit_csv({row}), std::string(kCsvHeader) +
                                 "\ndpoly,10,3,123456789012345678901234,0.10000000000000001,0.33333333333333331,-2.5,"
                                 "1e-300,7\n");
  const auto j = nlohmann::json::parse(emit_json({row}));
  ASSERT_EQ(j.size(), 1u);
  EXPECT_EQ(j[0]["x"], "10");
  EXPECT_EQ(j[0]["empirical"], "123456789012345678901234");
  EXPECT_EQ(j[0]["main2"].get<double>(), 1.0 / 3);
  std::vector<std::string> keys;
  for (auto it = j[0].begin(); it != j[0].end(); ++it) keys.push_back(it.key());
  EXPECT_EQ(keys.size(), 9u);
}

TEST(Emit, CsvAndJsonRoundTripRandomRows) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1e12, 1e12);
  std::vector<ComparisonRow> rows;
  for (int i = 0; i < 200; ++i) {
    rows.push_back({i % 2 ? "dd" : "dpoly", rng() % 1'000'000'000, 1 + rng() % 100,
                    int128(rng()) * int128(rng() % 1000), u(rng), u(rng), u(rng), u(rng) * 1e-9, u(rng) / 3});
  }
  EXPECT_EQ(parse_csv(emit_csv(rows)), rows);
  EXPECT_EQ(parse_json(emit_json(rows)), rows);
  EXPECT_THROW(parse_csv("kind,x\n"), format_error);
}

TEST(Compare, DpolyRowsAgainstDirectSums) {
  const auto cfg = small_config(CompareKind::dpoly);
  const auto rows = run_compare(cfg);
  ASSERT_EQ(rows.size(), 4u);
  const auto spf = build_spf(6000);
  // v-major order
  EXPECT_EQ(rows[0].x, 1000u);
  EXPECT_EQ(rows[0].v, 1u);
  EXPECT_EQ(rows[1].x, 5000u);
  EXPECT_EQ(rows[2].v, 2u);
  for (const auto& r : rows) {
    EXPECT_EQ(r.kind, "dpoly");
    EXPECT_EQ(r.empirical, sum_dpoly(r.x, r.v, spf).value);
    EXPECT_DOUBLE_EQ(r.main3, poly_main(double(r.x), r.v, zeta_constants(), 3));
    EXPECT_DOUBLE_EQ(r.residual, double(r.empirical) - r.main3);
    EXPECT_DOUBLE_EQ(r.residual_scaled, r.residual / std::pow(double(r.x), kDefaultResidualExponent));
  }
}

TEST(Compare, TruncationsImproveForDd) {
  RunConfig cfg = small_config(CompareKind::dd);
  cfg.x_list = {100'000};
  cfg.v_list = {1, 2, 4};
  for (const auto& r : run_compare(cfg)) {
    const double s = double(r.empirical);
    EXPECT_LT(std::abs(s - r.main3), std::abs(s - r.main2)) << r.v;
    EXPECT_LT(std::abs(s - r.main2), std::abs(s - r.main1)) << r.v;
    EXPECT_LT(std::abs(r.residual) / s, 0.01);
  }
}

TEST(Compare, ResidualShrinksRelativeToX) {
  RunConfig cfg = small_config(CompareKind::dpoly);
  cfg.x_list = {10'000, 100'000, 1'000'000};
  cfg.v_list = {1};
  const auto rows = run_compare(cfg);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_LT(std::abs(rows[i].residual) / double(rows[i].x), std::abs(rows[i - 1].residual) / double(rows[i - 1].x));
  }
}

TEST(Compare, SigmaCorrWithinTwoPercent) {
  RunConfig cfg = small_config(CompareKind::sigma_corr);
  cfg.alpha = 1;
  cfg.x_list = {10'000};
  cfg.v_list = {1};
  const auto rows = run_compare(cfg);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_NEAR(rows[0].main1, 5.0 / 6.0 * 1e12, 1e3);
  EXPECT_LT(std::abs(double(rows[0].empirical) / rows[0].main1 - 1), 0.02);
}

TEST(Compare, DeterministicAcrossThreadCounts) {
  RunConfig one = small_config(CompareKind::dpoly);
  one.x_list = {2000, 30'000, 7};
  one.v_list = {6, 1, 3};
  one.sieve.segment_size = 4096;
  RunConfig four = one;
  four.sieve.threads = 4;
  const auto a = run_compare(one);
  const auto b = run_compare(four);
  EXPECT_EQ(emit_csv(a), emit_csv(b));
  one.kind = four.kind = CompareKind::dd;
  EXPECT_EQ(emit_json(run_compare(one)), emit_json(run_compare(four)));
}

TEST(Compare, ConfigValidation) {
  RunConfig cfg = small_config(CompareKind::dpoly);
  cfg.x_list = {};
  EXPECT_THROW(run_compare(cfg), contract_error);
  cfg = small_config(CompareKind::dpoly);
  cfg.v_list = {0};
  EXPECT_THROW(run_compare(cfg), contract_error);
  cfg = small_config(CompareKind::dpoly);
  cfg.truncation = 4;
  EXPECT_THROW(run_compare(cfg), contract_error);
  cfg = small_config(CompareKind::dpoly);
  cfg.residual_exponent = 1.2;
  EXPECT_THROW(run_compare(cfg), contract_error);
  cfg = small_config(CompareKind::sigma_corr);
  EXPECT_THROW(run_compare(cfg), contract_error);
  EXPECT_THROW(parse_compare_kind("ff"), contract_error);
  EXPECT_EQ(parse_compare_kind("dd"), CompareKind::dd);
}

TEST(Compare, MemoryCapIsAResourceError) {
  RunConfig cfg = small_config(CompareKind::dpoly);
  cfg.sieve.memory_cap = 4096;
  EXPECT_THROW(run_compare(cfg), resource_error);
}

TEST(Verify, SmallBoundsPassEverySuite) {
  VerifyBounds b;
  b.xmax = 500;
  b.vmax = 12;
  const auto report = run_verify(verify_suite_names(), b);
  ASSERT_EQ(report.suites.size(), verify_suite_names().size());
  for (const auto& s : report.suites) {
    EXPECT_TRUE(s.passed()) << s.name << ": " << s.first_counterexample;
    EXPECT_GT(s.checks, 0u) << s.name;
  }
  EXPECT_TRUE(report.passed());
}

TEST(Verify, UnknownSuiteIsAContractError) {
  EXPECT_THROW(run_verify({"lemma1", "nope"}), contract_error);
}

TEST(Verify, FirstCounterexampleIsKept) {
  SuiteResult r;
  r.name = "demo";
  r.record(true, [] { return std::string("never"); });
  r.record(false, [] { return std::string("first"); });
  r.record(false, [] { return std::string("second"); });
  EXPECT_EQ(r.checks, 3u);
  EXPECT_EQ(r.failures, 2u);
  EXPECT_EQ(r.first_counterexample, "first");
  EXPECT_FALSE(r.passed());
}

}  // namespace
}  // namespace divcorr
