#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <variant>

#include "slplab/experiment.hpp"
#include "slplab/normal.hpp"

namespace slplab {

struct SuccessFailure {
  int successes = 0;
  int failures = 0;
  int trials() const { return successes + failures; }
};

namespace detail {

inline SuccessFailure count_bits(const BernoulliSeq& seq) {
  SuccessFailure sf;
  for (auto b : seq.bits) (b != 0) ? ++sf.successes : ++sf.failures;
  return sf;
}

inline std::string mismatch(const ExperimentModel& model, const Outcome& outcome,
                            const std::string& why) {
  return "outcome " + outcome.describe() + " does not fit " + model.describe() + ": " + why;
}

}  // namespace detail

/// Throws invalid_input unless `outcome` is a possible result of `model`.
inline void validate_outcome(const ExperimentModel& model, const Outcome& outcome) {
  std::visit(
      [&](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, Binomial>) {
          if (const auto* seq = outcome.get_if<BernoulliSeq>()) {
            require(static_cast<int>(seq->bits.size()) == m.trials,
                    detail::mismatch(model, outcome, "sequence length must equal n"));
          } else if (const auto* sum = outcome.get_if<BernoulliSummary>()) {
            require(sum->trials == m.trials,
                    detail::mismatch(model, outcome, "summary trial count must equal n"));
          } else {
            throw invalid_input(detail::mismatch(model, outcome, "expected Bernoulli data"));
          }
        } else if constexpr (std::is_same_v<M, NegBinomial>) {
          if (const auto* seq = outcome.get_if<BernoulliSeq>()) {
            const auto sf = detail::count_bits(*seq);
            require(sf.successes == m.target_successes,
                    detail::mismatch(model, outcome, "sequence must contain exactly r successes"));
            require(seq->bits.back() != 0,
                    detail::mismatch(model, outcome, "sampling stops on the r-th success"));
          } else if (const auto* sum = outcome.get_if<BernoulliSummary>()) {
            require(sum->successes == m.target_successes,
                    detail::mismatch(model, outcome, "summary successes must equal r"));
            require(sum->trials >= m.target_successes,
                    detail::mismatch(model, outcome, "trials must be >= r"));
          } else {
            throw invalid_input(detail::mismatch(model, outcome, "expected Bernoulli data"));
          }
        } else if constexpr (std::is_same_v<M, NormalFixedN>) {
          const auto* ns = outcome.get_if<NormalSummary>();
          require(ns != nullptr, detail::mismatch(model, outcome, "expected a normal summary"));
          require(ns->sample_size == m.sample_size,
                  detail::mismatch(model, outcome, "sample size must equal the fixed n"));
        } else if constexpr (std::is_same_v<M, NormalOptionalStopping>) {
          const auto* ns = outcome.get_if<NormalSummary>();
          require(ns != nullptr, detail::mismatch(model, outcome, "expected a normal summary"));
          require(ns->sample_size >= 1 && ns->sample_size <= m.max_trials,
                  detail::mismatch(model, outcome, "stop time must lie in [1, n_max]"));
        } else {
          const auto* mo = outcome.get_if<MixtureOutcome>();
          require(mo != nullptr,
                  detail::mismatch(model, outcome, "expected an outcome carrying the index j"));
          validate_outcome(mixture_component(model, mo->component), *mo->inner);
        }
      },
      model.variant());
}

/// Successes/failures of a Bernoulli-family outcome (after validation).
inline SuccessFailure bernoulli_counts(const ExperimentModel& model, const Outcome& outcome) {
  validate_outcome(model, outcome);
  require(model.parameter_space() == ParameterSpace::bernoulli_theta,
          "bernoulli_counts: not a Bernoulli-family model");
  if (const auto* seq = outcome.get_if<BernoulliSeq>()) return detail::count_bits(*seq);
  if (const auto* sum = outcome.get_if<BernoulliSummary>()) {
    return SuccessFailure{sum->successes, sum->trials - sum->successes};
  }
  const auto& mo = *outcome.get_if<MixtureOutcome>();
  return bernoulli_counts(mixture_component(model, mo.component), *mo.inner);
}

/// Canonical form of an outcome: trial sequences reduce to summaries,
/// summaries pass through, mixture outcomes canonicalize their inner part.
inline Outcome canonical_outcome(const ExperimentModel& model, const Outcome& outcome) {
  validate_outcome(model, outcome);
  if (const auto* seq = outcome.get_if<BernoulliSeq>()) {
    const auto sf = detail::count_bits(*seq);
    return Outcome::summary(sf.successes, sf.trials());
  }
  if (const auto* mo = outcome.get_if<MixtureOutcome>()) {
    return Outcome::mixture(mo->component,
                            canonical_outcome(mixture_component(model, mo->component), *mo->inner));
  }
  return outcome;
}

namespace detail {

inline void check_theta(const Rational& theta) {
  require(theta > 0 && theta < 1, "theta outside the open parameter space (0,1)");
}

inline Rational bernoulli_power(const Rational& theta, const SuccessFailure& sf) {
  return pow_rational(theta, static_cast<unsigned>(sf.successes)) *
         pow_rational(1 - theta, static_cast<unsigned>(sf.failures));
}

inline double normal_mean_density(double sample_mean, int n, double sigma, double mu) {
  const double sd = sigma / std::sqrt(static_cast<double>(n));
  const double z = (sample_mean - mu) / sd;
  return std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * std::numbers::pi));
}

}  // namespace detail

/// Probability (Bernoulli family, exact rational) or density (normal
/// family, double) of `outcome` under `model` at the given parameter.
/// Optional-stopping outcomes report the mu-dependent likelihood factor
/// only; the stopping-geometry constant is free of mu and left out.
inline Real pmf(const ExperimentModel& model, const Outcome& outcome, const Rational& param) {
  validate_outcome(model, outcome);
  return std::visit(
      [&](const auto& m) -> Real {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, Binomial>) {
          detail::check_theta(param);
          const auto sf = bernoulli_counts(model, outcome);
          const Rational kernel = detail::bernoulli_power(param, sf);
          if (outcome.get_if<BernoulliSeq>() != nullptr) return kernel;
          return Rational(binomial_coefficient(m.trials, sf.successes)) * kernel;
        } else if constexpr (std::is_same_v<M, NegBinomial>) {
          detail::check_theta(param);
          const auto sf = bernoulli_counts(model, outcome);
          const Rational kernel = detail::bernoulli_power(param, sf);
          if (outcome.get_if<BernoulliSeq>() != nullptr) return kernel;
          return Rational(binomial_coefficient(sf.trials() - 1, m.target_successes - 1)) * kernel;
        } else if constexpr (std::is_same_v<M, NormalFixedN>) {
          const auto& ns = *outcome.get_if<NormalSummary>();
          return Real(detail::normal_mean_density(ns.mean, ns.sample_size, m.sigma,
                                                  param.convert_to<double>()));
        } else if constexpr (std::is_same_v<M, NormalOptionalStopping>) {
          const auto& ns = *outcome.get_if<NormalSummary>();
          return Real(detail::normal_mean_density(ns.mean, ns.sample_size, m.sigma,
                                                  param.convert_to<double>()));
        } else {
          const auto& mo = *outcome.get_if<MixtureOutcome>();
          const Real inner = pmf(mixture_component(model, mo.component), *mo.inner, param);
          return Real(mixture_weight_exact(model, mo.component)) * inner;
        }
      },
      model.variant());
}

inline Real pmf(const ExperimentModel& model, const Outcome& outcome, double param) {
  if (model.parameter_space() == ParameterSpace::bernoulli_theta) {
    require(param > 0.0 && param < 1.0, "theta outside the open parameter space (0,1)");
  } else {
    require(std::isfinite(param), "mu must be finite");
  }
  return pmf(model, outcome, rational_from_double(param));
}

// ---------------------------------------------------------------------------

/// theta^successes * (1-theta)^failures with an exact leading constant.
struct BernoulliKernel {
  int successes = 0;
  int failures = 0;
  Rational constant = 1;
};

/// exp(-n (xbar - mu)^2 / (2 sigma^2)) with a mu-free leading constant.
struct NormalKernel {
  double mean = 0.0;
  int sample_size = 0;
  double sigma = 1.0;
  double constant = 1.0;
};

class LikelihoodKernel {
 public:
  using Variant = std::variant<BernoulliKernel, NormalKernel>;

  LikelihoodKernel(BernoulliKernel k) : v_(std::move(k)) {}  // NOLINT
  LikelihoodKernel(NormalKernel k) : v_(k) {}                // NOLINT

  bool is_bernoulli() const { return std::holds_alternative<BernoulliKernel>(v_); }
  const BernoulliKernel& bernoulli() const { return std::get<BernoulliKernel>(v_); }
  const NormalKernel& normal() const { return std::get<NormalKernel>(v_); }

  /// constant * kernel(param), evaluated in doubles.
  double evaluate(double param) const {
    if (is_bernoulli()) {
      const auto& k = bernoulli();
      return k.constant.convert_to<double>() * std::pow(param, k.successes) *
             std::pow(1.0 - param, k.failures);
    }
    const auto& k = normal();
    const double z = (k.mean - param) / (k.sigma / std::sqrt(static_cast<double>(k.sample_size)));
    return k.constant * std::exp(-0.5 * z * z);
  }

  /// Exact evaluation, Bernoulli family only.
  Real evaluate_exact(const Rational& theta) const {
    require(is_bernoulli(), "evaluate_exact: kernel is not Bernoulli-family");
    const auto& k = bernoulli();
    return Rational(k.constant *
                    detail::bernoulli_power(theta, SuccessFailure{k.successes, k.failures}));
  }

  /// True when the two kernels agree as functions of the parameter up to
  /// a parameter-free constant (exactly for Bernoulli; to within `tol`
  /// relative on the quadratic/linear coefficients for normal kernels).
  bool proportional_to(const LikelihoodKernel& other, double tol = 1e-12) const {
    if (is_bernoulli() != other.is_bernoulli()) return false;
    if (is_bernoulli()) {
      return bernoulli().successes == other.bernoulli().successes &&
             bernoulli().failures == other.bernoulli().failures;
    }
    // log-kernel is -(a/2) mu^2 + b mu + const with a = n/sigma^2, b = n xbar/sigma^2
    const auto& x = normal();
    const auto& y = other.normal();
    const double ax = x.sample_size / (x.sigma * x.sigma);
    const double ay = y.sample_size / (y.sigma * y.sigma);
    const double bx = ax * x.mean;
    const double by = ay * y.mean;
    const auto close = [tol](double u, double v) {
      return std::fabs(u - v) <= tol * std::max({std::fabs(u), std::fabs(v), 1.0});
    };
    return close(ax, ay) && close(bx, by);
  }

 private:
  Variant v_;
};

/// Factor pmf(model, outcome, .) = constant * kernel(.), constant free of
/// the parameter.
inline LikelihoodKernel likelihood_kernel(const ExperimentModel& model, const Outcome& outcome) {
  validate_outcome(model, outcome);
  return std::visit(
      [&](const auto& m) -> LikelihoodKernel {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, Binomial>) {
          const auto sf = bernoulli_counts(model, outcome);
          Rational constant = (outcome.get_if<BernoulliSeq>() != nullptr)
                                  ? Rational(1)
                                  : Rational(binomial_coefficient(m.trials, sf.successes));
          return BernoulliKernel{sf.successes, sf.failures, std::move(constant)};
        } else if constexpr (std::is_same_v<M, NegBinomial>) {
          const auto sf = bernoulli_counts(model, outcome);
          Rational constant =
              (outcome.get_if<BernoulliSeq>() != nullptr)
                  ? Rational(1)
                  : Rational(binomial_coefficient(sf.trials() - 1, m.target_successes - 1));
          return BernoulliKernel{sf.successes, sf.failures, std::move(constant)};
        } else if constexpr (std::is_same_v<M, NormalFixedN>) {
          const auto& ns = *outcome.get_if<NormalSummary>();
          const double sd = m.sigma / std::sqrt(static_cast<double>(ns.sample_size));
          return NormalKernel{ns.mean, ns.sample_size, m.sigma,
                              1.0 / (sd * std::sqrt(2.0 * std::numbers::pi))};
        } else if constexpr (std::is_same_v<M, NormalOptionalStopping>) {
          const auto& ns = *outcome.get_if<NormalSummary>();
          const double sd = m.sigma / std::sqrt(static_cast<double>(ns.sample_size));
          return NormalKernel{ns.mean, ns.sample_size, m.sigma,
                              1.0 / (sd * std::sqrt(2.0 * std::numbers::pi))};
        } else {
          const auto& mo = *outcome.get_if<MixtureOutcome>();
          LikelihoodKernel inner =
              likelihood_kernel(mixture_component(model, mo.component), *mo.inner);
          const double w = mixture_weight(model, mo.component);
          if (inner.is_bernoulli()) {
            BernoulliKernel k = inner.bernoulli();
            k.constant *= mixture_weight_exact(model, mo.component);
            return k;
          }
          NormalKernel k = inner.normal();
          k.constant *= w;
          return k;
        }
      },
      model.variant());
}

// ---------------------------------------------------------------------------

/// Value of the minimal sufficient statistic: R for Binomial, N for
/// NegBinomial, (xbar, n) for the normal models, and (j, inner value)
/// for mixtures. Birnbaumized models use the index-erasing statistic
/// instead (see tb_statistic).
class StatisticValue {
 public:
  struct SuccessCount {
    int value = 0;
  };
  struct TrialCount {
    int value = 0;
  };
  struct MeanAndCount {
    double mean = 0.0;
    int sample_size = 0;
  };
  struct Indexed {
    int component = 1;
    std::shared_ptr<const StatisticValue> inner;
  };
  using Variant = std::variant<SuccessCount, TrialCount, MeanAndCount, Indexed>;

  static StatisticValue success_count(int r) { return StatisticValue(SuccessCount{r}); }
  static StatisticValue trial_count(int n) { return StatisticValue(TrialCount{n}); }
  static StatisticValue mean_and_count(double mean, int n) {
    return StatisticValue(MeanAndCount{mean, n});
  }
  static StatisticValue indexed(int component, StatisticValue inner) {
    return StatisticValue(
        Indexed{component, std::make_shared<const StatisticValue>(std::move(inner))});
  }

  const Variant& variant() const { return v_; }

  friend bool operator==(const StatisticValue& a, const StatisticValue& b) {
    return std::visit(
        [](const auto& x, const auto& y) -> bool {
          using X = std::decay_t<decltype(x)>;
          using Y = std::decay_t<decltype(y)>;
          if constexpr (!std::is_same_v<X, Y>) {
            return false;
          } else if constexpr (std::is_same_v<X, SuccessCount> || std::is_same_v<X, TrialCount>) {
            return x.value == y.value;
          } else if constexpr (std::is_same_v<X, MeanAndCount>) {
            return x.mean == y.mean && x.sample_size == y.sample_size;
          } else {
            return x.component == y.component && *x.inner == *y.inner;
          }
        },
        a.v_, b.v_);
  }
  friend bool operator!=(const StatisticValue& a, const StatisticValue& b) { return !(a == b); }

  std::string describe() const {
    return std::visit(
        [](const auto& s) -> std::string {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, SuccessCount>) {
            return "R=" + std::to_string(s.value);
          } else if constexpr (std::is_same_v<T, TrialCount>) {
            return "N=" + std::to_string(s.value);
          } else if constexpr (std::is_same_v<T, MeanAndCount>) {
            return "(xbar=" + compact_double(s.mean) + ", n=" + std::to_string(s.sample_size) + ")";
          } else {
            return "(j=" + std::to_string(s.component) + ", " + s.inner->describe() + ")";
          }
        },
        v_);
  }

 private:
  explicit StatisticValue(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

inline StatisticValue sufficient_statistic(const ExperimentModel& model, const Outcome& outcome) {
  validate_outcome(model, outcome);
  return std::visit(
      [&](const auto& m) -> StatisticValue {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, Binomial>) {
          return StatisticValue::success_count(bernoulli_counts(model, outcome).successes);
        } else if constexpr (std::is_same_v<M, NegBinomial>) {
          return StatisticValue::trial_count(bernoulli_counts(model, outcome).trials());
        } else if constexpr (std::is_same_v<M, NormalFixedN> ||
                             std::is_same_v<M, NormalOptionalStopping>) {
          const auto& ns = *outcome.get_if<NormalSummary>();
          return StatisticValue::mean_and_count(ns.mean, ns.sample_size);
        } else if constexpr (std::is_same_v<M, Mixture>) {
          const auto& mo = *outcome.get_if<MixtureOutcome>();
          return StatisticValue::indexed(
              mo.component, sufficient_statistic(mixture_component(model, mo.component), *mo.inner));
        } else {
          throw invalid_input(
              "sufficient_statistic: Birnbaumized models report the index-erasing "
              "statistic; use tb_statistic");
        }
      },
      model.variant());
}

}  // namespace slplab
