#pragma once

// Ramanujan's tau from the q-expansion of Delta = q prod_{n>=1} (1 - q^n)^24.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "divcorr/errors.hpp"
#include "divcorr/int128.hpp"
#include "divcorr/multiplicative.hpp"

namespace divcorr {

inline constexpr std::uint64_t kTauTableMax = 10'000;

using Series = std::vector<int128>;

// a * b truncated to a.size() coefficients.
inline Series truncated_product(const Series& a, const Series& b) {
  const std::size_t len = a.size();
  Series out(len, 0);
  for (std::size_t i = 0; i < len; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; i + j < len && j < b.size(); ++j) {
      if (b[j] == 0) continue;
      out[i + j] = checked_add(out[i + j], checked_mul(a[i], b[j]));
    }
  }
  return out;
}

// tau(0..n) with tau(0) = 0. Coefficients stay exact; any int128 overflow throws.
inline std::vector<int128> ramanujan_tau_table(std::uint64_t n) {
  if (n < 1) throw range_error("tau table needs N >= 1");
  if (n > kTauTableMax) throw range_error("tau table limited to N <= " + std::to_string(kTauTableMax));

  // eta = prod_{k=1}^{n-1} (1 - q^k) truncated at degree n-1.
  const std::size_t len = n;
  Series eta(len, 0);
  eta[0] = 1;
  for (std::size_t k = 1; k < len; ++k) {
    for (std::size_t i = len - 1; i >= k; --i) eta[i] -= eta[i - k];
  }

  const Series p2 = truncated_product(eta, eta);
  const Series p4 = truncated_product(p2, p2);
  const Series p8 = truncated_product(p4, p4);
  const Series p16 = truncated_product(p8, p8);
  const Series p24 = truncated_product(p16, p8);

  std::vector<int128> tau(n + 1, 0);
  for (std::uint64_t m = 1; m <= n; ++m) tau[m] = p24[m - 1];
  return tau;
}

// tau as a multiplicative spec backed by a table; prime powers beyond the
// table raise evaluation_error. g(p) = p^11.
inline ExactSpec tau_spec(std::shared_ptr<const std::vector<int128>> table) {
  const std::uint64_t limit = table->size() - 1;
  return ExactSpec{
      "tau",
      [table, limit](std::uint64_t p, unsigned k) {
        std::uint64_t pk = 1;
        for (unsigned i = 0; i < k; ++i) {
          if (pk > limit / p) throw evaluation_error("tau table (N = " + std::to_string(limit) + ") does not cover " +
                                                     std::to_string(p) + "^" + std::to_string(k));
          pk *= p;
        }
        return (*table)[pk];
      },
      [](std::uint64_t p) { return checked_pow(int128(p), 11); },
  };
}

inline ExactSpec tau_spec(std::uint64_t n) {
  return tau_spec(std::make_shared<const std::vector<int128>>(ramanujan_tau_table(n)));
}

}  // namespace divcorr
