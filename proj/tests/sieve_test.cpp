#include <cstdlib>
#include <numeric>

#include <gtest/gtest.h>

#include "divcorr/arith.hpp"
#include "divcorr/sieve.hpp"

namespace divcorr {
namespace {

std::uint32_t trial_spf(std::uint64_t n) {
  if (n == 1) return 1;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) return std::uint32_t(p);
  }
  return std::uint32_t(n);
}

std::uint32_t trial_d(std::uint64_t n) {
  std::uint32_t c = 0;
  for (std::uint64_t d = 1; d * d <= n; ++d) {
    if (n % d == 0) c += (d * d == n) ? 1 : 2;
  }
  return c;
}

TEST(SpfTable, Examples) {
  const auto one = build_spf(1);
  EXPECT_EQ(one.limit(), 1u);
  EXPECT_EQ(one.at(1), 1u);
  EXPECT_EQ(build_spf(12).at(12), 2u);
  EXPECT_EQ(build_spf(97).at(97), 97u);
  EXPECT_THROW(build_spf(12).at(13), range_error);
  EXPECT_THROW(build_spf(0), range_error);
}

TEST(SpfTable, MatchesTrialDivision) {
  const auto spf = build_spf(20'000);
  for (std::uint64_t n = 1; n <= 20'000; ++n) ASSERT_EQ(spf[n], trial_spf(n)) << n;
}

TEST(DivisorTable, Examples) {
  const auto t = build_divisor_table(10);
  std::vector<std::uint32_t> oracle;
  for (std::uint64_t n = 1; n <= 10; ++n) oracle.push_back(trial_d(n));
  EXPECT_EQ(std::vector<std::uint32_t>(t.values().begin(), t.values().end()), oracle);
  EXPECT_EQ(oracle, (std::vector<std::uint32_t>{1, 2, 2, 3, 2, 4, 2, 4, 3, 4}));
  EXPECT_EQ(build_divisor_table(36).at(36), 9u);
  EXPECT_EQ(build_divisor_table(1).at(1), 1u);
}

TEST(DivisorTable, AgreesWithFactorization) {
  const std::uint64_t n = 10'000;
  const auto t = build_divisor_table(n);
  const auto spf = build_spf(n);
  for (std::uint64_t m = 1; m <= n; ++m) ASSERT_EQ(t[m], divisor_count(factorize(m, spf))) << m;
}

TEST(SegmentedSieve, BitIdenticalToMonolithic) {
  const std::uint64_t n = 200'003;
  const auto spf_mono = build_spf_monolithic(n);
  const auto d_mono = build_divisor_table_monolithic(n);
  for (std::size_t seg : {std::size_t(1000), std::size_t(4096), std::size_t(65'536)}) {
    for (unsigned threads : {1u, 3u}) {
      SieveConfig cfg;
      cfg.segment_size = seg;
      cfg.threads = threads;
      EXPECT_TRUE(build_spf_segmented(n, cfg) == spf_mono) << seg << " " << threads;
      EXPECT_TRUE(build_divisor_table_segmented(n, cfg) == d_mono) << seg << " " << threads;
      EXPECT_TRUE(build_spf(n, cfg) == spf_mono);
    }
  }
}

TEST(SegmentedSieve, SmallAndEdgeLimits) {
  SieveConfig cfg;
  cfg.segment_size = 7;
  for (std::uint64_t n : {1, 2, 3, 7, 8, 49, 50}) {
    EXPECT_TRUE(build_spf_segmented(n, cfg) == build_spf_monolithic(n)) << n;
    EXPECT_TRUE(build_divisor_table_segmented(n, cfg) == build_divisor_table_monolithic(n)) << n;
  }
}

TEST(ShiftedProductTable, Examples) {
  const auto t = build_shifted_product_table(4, 2);
  EXPECT_EQ(std::vector<std::uint32_t>(t.values().begin(), t.values().end()),
            (std::vector<std::uint32_t>{trial_d(3), trial_d(8), trial_d(15), trial_d(24)}));
  EXPECT_EQ(std::vector<std::uint32_t>(t.values().begin(), t.values().end()), (std::vector<std::uint32_t>{2, 4, 4, 8}));
  EXPECT_EQ(build_shifted_product_table(1, 1).at(1), 2u);
  // gcd(3, 2) = 1: d(15) = d(3) d(5)
  EXPECT_EQ(t.at(3), trial_d(3) * trial_d(5));
}

TEST(ShiftedProductTable, AgreesWithMergedFactorizationAndGcdConvolution) {
  const std::uint64_t n = 10'000;
  const auto spf = build_spf(n + 50);
  const auto d = build_divisor_table(n + 50);
  for (std::uint64_t v = 1; v <= 50; ++v) {
    const auto t = build_shifted_product_table(n, v, spf);
    for (std::uint64_t m = 1; m <= n; ++m) {
      ASSERT_EQ(t[m], divisor_count(factorize(m, spf) * factorize(m + v, spf))) << m << " " << v;
      // d(m)d(m+v) = sum_{e | gcd(m,v)} d(m(m+v)/e^2)
      std::uint64_t rhs = 0;
      const std::uint64_t g = std::gcd(m, v);
      for (std::uint64_t e = 1; e <= g; ++e) {
        if (g % e) continue;
        rhs += divisor_count(factorize(m / e, spf) * factorize((m + v) / e, spf));
      }
      ASSERT_EQ(std::uint64_t(d[m]) * d[m + v], rhs) << m << " " << v;
    }
  }
}

TEST(ShiftedProductTable, Errors) {
  const auto spf = build_spf(100);
  EXPECT_THROW(build_shifted_product_table(99, 2, spf), range_error);
  EXPECT_THROW(build_shifted_product_table(10, 0, spf), range_error);
  EXPECT_NO_THROW(build_shifted_product_table(98, 2, spf));
}

TEST(ShiftedProductTable, ThreadCountDoesNotChangeBytes) {
  const auto spf = build_spf(100'100);
  SieveConfig one;
  one.segment_size = 3000;
  SieveConfig four = one;
  four.threads = 4;
  EXPECT_TRUE(build_shifted_product_table(100'000, 6, spf, one) == build_shifted_product_table(100'000, 6, spf, four));
}

TEST(MemoryCap, ExceedingCapIsAResourceError) {
  SieveConfig cfg;
  cfg.memory_cap = 1024;
  EXPECT_THROW(build_spf(10'000, cfg), resource_error);
  EXPECT_THROW(build_divisor_table(10'000, cfg), resource_error);
  EXPECT_NO_THROW(build_spf(100, cfg));
}

TEST(MemoryCap, ByteCountParsingAndEnvironment) {
  EXPECT_EQ(parse_byte_count("123"), 123u);
  EXPECT_EQ(parse_byte_count("4K"), 4096u);
  EXPECT_EQ(parse_byte_count("2g"), 2ull << 30);
  EXPECT_THROW(parse_byte_count("12X"), contract_error);
  EXPECT_THROW(parse_byte_count(""), contract_error);

  ::setenv("DIVCORR_MEMCAP", "64M", 1);
  EXPECT_EQ(default_memory_cap(), 64ull << 20);
  EXPECT_EQ(SieveConfig{}.memory_cap, 64ull << 20);
  ::unsetenv("DIVCORR_MEMCAP");
  EXPECT_EQ(default_memory_cap(), kDefaultMemoryCap);
}

}  // namespace
}  // namespace divcorr
