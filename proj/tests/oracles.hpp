#pragma once

// Test-side oracles. These deliberately take different routes than the
// library: Pascal's triangle instead of the multiplicative formula,
// whole-sample-space enumeration instead of tail formulas, and the libm
// erfc instead of the Cody rational approximation.

#include <bit>
#include <cmath>
#include <cstdint>
#include <vector>

#include "slplab/rational.hpp"

namespace oracle {

using slplab::Integer;
using slplab::Rational;

inline Integer choose(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::vector<Integer> row{1};
  for (int i = 1; i <= n; ++i) {
    std::vector<Integer> next(static_cast<std::size_t>(i) + 1, 1);
    for (int j = 1; j < i; ++j) next[j] = row[j - 1] + row[j];
    row = std::move(next);
  }
  return row[static_cast<std::size_t>(k)];
}

inline Rational power(const Rational& base, int exponent) {
  Rational out = 1;
  for (int i = 0; i < exponent; ++i) out *= base;
  return out;
}

// Probability of each success count among length-n sequences, found by
// visiting all 2^n sequences and grouping equal terms.
inline std::vector<Integer> sequence_counts_by_successes(int n) {
  std::vector<Integer> counts(static_cast<std::size_t>(n) + 1, 0);
  for (std::uint32_t bits = 0; bits < (std::uint32_t{1} << n); ++bits) {
    ++counts[static_cast<std::size_t>(std::popcount(bits))];
  }
  return counts;
}

/// P(R <= r) for a fixed-n Bernoulli experiment, by enumerating all 2^n
/// trial sequences.
inline Rational binomial_low_tail_bruteforce(int n, int r, const Rational& theta) {
  const auto counts = sequence_counts_by_successes(n);
  Rational total = 0;
  for (int k = 0; k <= r; ++k) {
    total += Rational(counts[static_cast<std::size_t>(k)]) * power(theta, k) *
             power(1 - theta, n - k);
  }
  return total;
}

/// P(R >= r), same enumeration.
inline Rational binomial_high_tail_bruteforce(int n, int r, const Rational& theta) {
  const auto counts = sequence_counts_by_successes(n);
  Rational total = 0;
  for (int k = r; k <= n; ++k) {
    total += Rational(counts[static_cast<std::size_t>(k)]) * power(theta, k) *
             power(1 - theta, n - k);
  }
  return total;
}

/// P(N >= n) for sampling until the r-th success, by enumerating all
/// 2^(n-1) possible first n-1 trials and walking each for the first
/// passage to r successes. The suffix beyond a stop marginalizes out, so
/// summing full-prefix probabilities of the stopped sequences gives
/// P(N <= n-1) directly.
inline Rational neg_binomial_upper_tail_bruteforce(int r, int n, const Rational& theta) {
  const int m = n - 1;
  std::vector<std::int64_t> stopped_by_successes(static_cast<std::size_t>(m) + 1, 0);
  for (std::uint32_t bits = 0; bits < (std::uint32_t{1} << m); ++bits) {
    int successes = 0;
    bool stopped = false;
    for (int i = 0; i < m; ++i) {
      if ((bits >> i) & 1u) {
        ++successes;
        if (successes == r) {
          stopped = true;
          break;
        }
      }
    }
    if (stopped) ++stopped_by_successes[static_cast<std::size_t>(std::popcount(bits))];
  }
  Rational stopped_mass = 0;
  for (int k = 0; k <= m; ++k) {
    stopped_mass += Rational(stopped_by_successes[static_cast<std::size_t>(k)]) *
                    power(theta, k) * power(1 - theta, m - k);
  }
  return 1 - stopped_mass;
}

inline double norm_upper_tail(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }
inline double norm_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace oracle
