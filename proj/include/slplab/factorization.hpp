#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "slplab/likelihood.hpp"

namespace slplab {

struct FactorizationOptions {
  // Hard cap on the number of sequences enumerated in any single slice.
  std::int64_t max_sequences_per_slice = std::int64_t{1} << 24;
  // NegBinomial support is infinite; the slices N = r..max_trials must be
  // requested explicitly. Ignored for Binomial.
  int neg_binomial_max_trials = 0;
};

/// One conditional slice {T = t}: every sequence in the slice, its exact
/// uniform conditional probability, and whether the factorization
/// f(x;theta) = f_T(t;theta) * f(x|t) held exactly at every parameter.
struct FactorizationSlice {
  std::string statistic;
  std::int64_t sequence_count = 0;
  Rational conditional = 0;   // common value of f(x|t), free of theta
  bool uniform = false;       // every sequence in the slice shares it
  bool parameter_free = false;
  bool factorizes = false;

  friend bool operator==(const FactorizationSlice&, const FactorizationSlice&) = default;
};

struct FactorizationReport {
  std::string model;
  std::vector<Rational> params;
  std::vector<FactorizationSlice> slices;
  bool pass = false;

  friend bool operator==(const FactorizationReport&, const FactorizationReport&) = default;
};

namespace detail {

// Gosper's hack: next bit pattern with the same popcount.
inline std::uint64_t next_same_popcount(std::uint64_t mask) {
  const std::uint64_t c = mask & (~mask + 1);
  const std::uint64_t r = mask + c;
  return (((r ^ mask) >> 2) / c) | r;
}

// Enumerates every length-`positions` pattern with exactly `ones` set
// bits, calling fn(popcount_check_passed) per pattern. Returns the count.
template <class Fn>
std::int64_t enumerate_patterns(int positions, int ones, Fn&& fn) {
  if (ones == 0) {
    fn(true);
    return 1;
  }
  std::int64_t count = 0;
  std::uint64_t mask = (std::uint64_t{1} << ones) - 1;
  const std::uint64_t limit = std::uint64_t{1} << positions;
  while (mask < limit) {
    fn(std::popcount(mask) == ones);
    ++count;
    const std::uint64_t next = next_same_popcount(mask);
    if (next <= mask) break;
    mask = next;
  }
  return count;
}

struct SliceCheck {
  std::string statistic;
  int sequence_length = 0;   // positions enumerated
  int sequence_ones = 0;     // successes among those positions
  SuccessFailure full;       // counts of the full sequence (incl. forced final success)
  Integer expected_count;
};

}  // namespace detail

/// Exhaustively verifies the sufficiency factorization
///   f(x; theta) = f_T(t; theta) * f(x | t)
/// in exact rational arithmetic for every conditional slice of a Binomial
/// model (statistic R) or the requested slices of a NegBinomial model
/// (statistic N), and that the conditional is the same at every parameter.
inline FactorizationReport verify_factorization(const ExperimentModel& model,
                                                const std::vector<Rational>& params,
                                                const FactorizationOptions& options = {}) {
  require(!params.empty(), "verify_factorization: params must be nonempty");
  for (const auto& theta : params) detail::check_theta(theta);

  std::vector<detail::SliceCheck> checks;
  if (const auto* bin = model.get_if<Binomial>()) {
    require(bin->trials <= 24, "verify_factorization: Binomial needs n <= 24");
    for (int r = 0; r <= bin->trials; ++r) {
      detail::SliceCheck c;
      c.statistic = "R=" + std::to_string(r);
      c.sequence_length = bin->trials;
      c.sequence_ones = r;
      c.full = SuccessFailure{r, bin->trials - r};
      c.expected_count = binomial_coefficient(bin->trials, r);
      checks.push_back(std::move(c));
    }
  } else if (const auto* nb = model.get_if<NegBinomial>()) {
    const int r = nb->target_successes;
    require(options.neg_binomial_max_trials >= r,
            "verify_factorization: NegBinomial support is infinite; set "
            "neg_binomial_max_trials >= r to choose the slices N = r..max");
    for (int n = r; n <= options.neg_binomial_max_trials; ++n) {
      detail::SliceCheck c;
      c.statistic = "N=" + std::to_string(n);
      c.sequence_length = n - 1;  // last trial is the forced r-th success
      c.sequence_ones = r - 1;
      c.full = SuccessFailure{r, n - r};
      c.expected_count = binomial_coefficient(n - 1, r - 1);
      checks.push_back(std::move(c));
    }
  } else {
    throw invalid_input("verify_factorization: only Binomial and NegBinomial slices enumerate");
  }

  FactorizationReport report;
  report.model = model.describe();
  report.params = params;
  report.pass = true;

  for (const auto& check : checks) {
    require(check.expected_count <= Integer(options.max_sequences_per_slice),
            "verify_factorization: slice " + check.statistic + " exceeds the sequence cap");

    FactorizationSlice slice;
    slice.statistic = check.statistic;
    slice.uniform = true;
    slice.parameter_free = true;
    slice.factorizes = true;

    bool popcounts_ok = true;
    slice.sequence_count = detail::enumerate_patterns(
        check.sequence_length, check.sequence_ones,
        [&](bool popcount_ok) { popcounts_ok = popcounts_ok && popcount_ok; });
    slice.uniform = popcounts_ok && Integer(slice.sequence_count) == check.expected_count;

    std::optional<Rational> common_conditional;
    for (const auto& theta : params) {
      // Every sequence in the slice has the same full-sequence probability;
      // the enumeration above certifies the slice membership and count.
      const Rational seq_prob = detail::bernoulli_power(theta, check.full);
      const Rational f_t = Rational(check.expected_count) * seq_prob;
      ensure(f_t > 0, "verify_factorization: marginal vanished inside (0,1)");
      const Rational conditional = seq_prob / f_t;
      if (seq_prob != f_t * conditional) slice.factorizes = false;
      if (conditional != Rational(1) / Rational(check.expected_count)) slice.uniform = false;
      if (!common_conditional) {
        common_conditional = conditional;
      } else if (*common_conditional != conditional) {
        slice.parameter_free = false;
      }
    }
    slice.conditional = common_conditional.value_or(Rational(0));

    report.pass = report.pass && slice.uniform && slice.parameter_free && slice.factorizes;
    report.slices.push_back(std::move(slice));
  }
  return report;
}

// ---------------------------------------------------------------------------

struct NormalizationReport {
  std::string model;
  std::string method;  // "exact-sum", "partial-sum", "quadrature", or mixtures thereof
  Real total;
  std::optional<int> truncated_at;  // NegBinomial: first N with partial sum >= 1 - tol
  bool exact = false;
  bool pass = false;
};

namespace detail {

struct NormalizationResult {
  Real total;
  std::optional<int> truncated_at;
  bool exact = false;
  std::string method;
};

inline NormalizationResult normalization_total(const ExperimentModel& model,
                                               const Rational& param, const Rational& tol);

inline NormalizationResult binomial_total(const Binomial& m, const Rational& theta) {
  Rational sum = 0;
  for (int r = 0; r <= m.trials; ++r) {
    sum += Rational(binomial_coefficient(m.trials, r)) *
           bernoulli_power(theta, SuccessFailure{r, m.trials - r});
  }
  return {Real(sum), std::nullopt, true, "exact-sum"};
}

inline NormalizationResult neg_binomial_total(const NegBinomial& m, const Rational& theta,
                                              const Rational& tol) {
  const Rational target = 1 - tol;
  Rational sum = 0;
  const int hard_cap = 1 << 20;
  for (int n = m.target_successes; n <= hard_cap; ++n) {
    sum += Rational(binomial_coefficient(n - 1, m.target_successes - 1)) *
           bernoulli_power(theta, SuccessFailure{m.target_successes, n - m.target_successes});
    if (sum >= target) return {Real(sum), n, false, "partial-sum"};
  }
  throw invalid_input("normalization_check: NegBinomial partial sum did not reach 1 - tol");
}

inline NormalizationResult normal_total(const NormalFixedN& m, const Rational& mu_param) {
  // Composite Simpson over +-12 standard deviations of the sample mean.
  const double mu = mu_param.convert_to<double>();
  const double sd = m.sigma / std::sqrt(static_cast<double>(m.sample_size));
  const double lo = mu - 12.0 * sd;
  const double hi = mu + 12.0 * sd;
  const int intervals = 20000;  // even
  const double h = (hi - lo) / intervals;
  double sum = normal_mean_density(lo, m.sample_size, m.sigma, mu) +
               normal_mean_density(hi, m.sample_size, m.sigma, mu);
  for (int i = 1; i < intervals; ++i) {
    const double x = lo + i * h;
    sum += (i % 2 == 1 ? 4.0 : 2.0) * normal_mean_density(x, m.sample_size, m.sigma, mu);
  }
  return {Real(sum * h / 3.0), std::nullopt, false, "quadrature"};
}

inline NormalizationResult normalization_total(const ExperimentModel& model,
                                               const Rational& param, const Rational& tol) {
  return std::visit(
      [&](const auto& m) -> NormalizationResult {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, Binomial>) {
          check_theta(param);
          return binomial_total(m, param);
        } else if constexpr (std::is_same_v<M, NegBinomial>) {
          check_theta(param);
          return neg_binomial_total(m, param, tol);
        } else if constexpr (std::is_same_v<M, NormalFixedN>) {
          return normal_total(m, param);
        } else if constexpr (std::is_same_v<M, NormalOptionalStopping>) {
          throw invalid_input(
              "normalization_check: optional stopping has no closed-form sampling "
              "distribution; use the stopping simulation");
        } else if constexpr (std::is_same_v<M, Mixture>) {
          auto a = normalization_total(*m.first, param, tol);
          auto b = normalization_total(*m.second, param, tol);
          const Rational w = rational_from_double(m.weight_first);
          NormalizationResult out;
          out.total = Real(w) * a.total + Real(1 - w) * b.total;
          out.exact = a.exact && b.exact;
          out.method = "mixture(" + a.method + ", " + b.method + ")";
          if (a.truncated_at || b.truncated_at) {
            out.truncated_at = std::max(a.truncated_at.value_or(0), b.truncated_at.value_or(0));
          }
          return out;
        } else {
          // The enlarged experiment is itself a two-component mixture over
          // the pair members' experiments.
          auto a = normalization_total(m.pair->first.model, param, tol);
          auto b = normalization_total(m.pair->second.model, param, tol);
          const Rational w = rational_from_double(m.weight_first);
          NormalizationResult out;
          out.total = Real(w) * a.total + Real(1 - w) * b.total;
          out.exact = a.exact && b.exact;
          out.method = "mixture(" + a.method + ", " + b.method + ")";
          if (a.truncated_at || b.truncated_at) {
            out.truncated_at = std::max(a.truncated_at.value_or(0), b.truncated_at.value_or(0));
          }
          return out;
        }
      },
      model.variant());
}

}  // namespace detail

/// Total-probability check. Finite Bernoulli-family models must sum to 1
/// exactly; NegBinomial sums adaptively until the mass reaches 1 - tol
/// and reports the truncation point; NormalFixedN integrates the density.
inline NormalizationReport normalization_check(const ExperimentModel& model, double param,
                                               double tol) {
  require(tol > 0.0, "normalization_check: tol must be positive");
  const auto result =
      detail::normalization_total(model, rational_from_double(param), rational_from_double(tol));
  NormalizationReport report;
  report.model = model.describe();
  report.method = result.method;
  report.total = result.total;
  report.truncated_at = result.truncated_at;
  report.exact = result.exact;
  if (result.exact) {
    report.pass = result.total.rational() == 1;
  } else {
    report.pass = std::fabs(result.total.value() - 1.0) <= tol;
  }
  return report;
}

}  // namespace slplab
