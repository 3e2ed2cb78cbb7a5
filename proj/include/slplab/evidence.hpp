#pragma once

#include <string>

#include "slplab/likelihood.hpp"

namespace slplab {

inline constexpr double kEvidenceTolerance = 1e-12;

enum class Direction { less, greater };

inline std::string to_string(Direction d) { return d == Direction::less ? "less" : "greater"; }

/// One-sided point null: H0 at null_value against the stated direction.
struct HypothesisSpec {
  double null_value = 0.0;
  Direction direction = Direction::less;
};

/// Which sampling distribution produced a p-value. Every assessment
/// carries one of these; there is no way to build an index-erased
/// "came from somewhere" assessment.
enum class SamplingDistribution {
  component_conditional,
  mixture_unconditional,
  birnbaum_unconditional,
};

inline std::string to_string(SamplingDistribution d) {
  switch (d) {
    case SamplingDistribution::component_conditional: return "component-conditional";
    case SamplingDistribution::mixture_unconditional: return "mixture-unconditional";
    case SamplingDistribution::birnbaum_unconditional: return "birnbaum-unconditional";
  }
  throw internal_error("unknown sampling distribution tag");
}

struct EvidenceAssessment {
  Real p_value;
  SamplingDistribution distribution_used = SamplingDistribution::component_conditional;
  std::string source;
  std::string trace;
  // Set when an index-erasing statistic passed a non-pair outcome through
  // with its index intact.
  bool index_preserved = false;

  friend bool operator==(const EvidenceAssessment&, const EvidenceAssessment&) = default;
};

namespace detail {

inline void check_hypothesis(const ExperimentModel& model, const HypothesisSpec& hyp) {
  if (model.parameter_space() == ParameterSpace::bernoulli_theta) {
    require(hyp.null_value > 0.0 && hyp.null_value < 1.0,
            "hypothesis: theta0 must lie in (0,1)");
  } else {
    require(std::isfinite(hyp.null_value), "hypothesis: mu0 must be finite");
  }
}

inline Rational binomial_tail(int trials, int from, int to, const Rational& theta) {
  Rational sum = 0;
  for (int k = from; k <= to; ++k) {
    sum += Rational(binomial_coefficient(trials, k)) *
           bernoulli_power(theta, SuccessFailure{k, trials - k});
  }
  return sum;
}

}  // namespace detail

/// Sampling-theory evidence assessment of a component experiment: a
/// p-value computed against that experiment's own sampling distribution.
///
/// Tail conventions (exact rationals for the Bernoulli family):
///   Binomial,    less:    P(R <= r_obs; theta0)
///   Binomial,    greater: P(R >= r_obs; theta0)
///   NegBinomial, less:    P(N >= n_obs; theta0), via the finite
///                         complement "fewer than r successes in n-1 trials"
///   NegBinomial, greater: P(N <= n_obs; theta0)
///   NormalFixedN: upper/lower tail of sqrt(n)(xbar - mu0)/sigma.
///
/// Optional stopping has no closed-form observed-boundary p-value; it is
/// assessed by simulation (see stopping.hpp) and rejected here.
inline EvidenceAssessment p_value(const ExperimentModel& model, const Outcome& outcome,
                                  const HypothesisSpec& hyp) {
  validate_outcome(model, outcome);
  detail::check_hypothesis(model, hyp);

  EvidenceAssessment out;
  out.distribution_used = SamplingDistribution::component_conditional;
  out.source = ExperimentOutcome{model, outcome}.describe();

  std::visit(
      [&](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, Binomial>) {
          const Rational theta0 = rational_from_double(hyp.null_value);
          const int r = bernoulli_counts(model, outcome).successes;
          if (hyp.direction == Direction::less) {
            out.p_value = detail::binomial_tail(m.trials, 0, r, theta0);
            out.trace = "P(R <= " + std::to_string(r) + "; theta0=" +
                        compact_double(hyp.null_value) + ") under " + model.describe();
          } else {
            out.p_value = detail::binomial_tail(m.trials, r, m.trials, theta0);
            out.trace = "P(R >= " + std::to_string(r) + "; theta0=" +
                        compact_double(hyp.null_value) + ") under " + model.describe();
          }
        } else if constexpr (std::is_same_v<M, NegBinomial>) {
          const Rational theta0 = rational_from_double(hyp.null_value);
          const int n = bernoulli_counts(model, outcome).trials();
          const int r = m.target_successes;
          if (hyp.direction == Direction::less) {
            // {N >= n} == {fewer than r successes in the first n-1 trials}
            out.p_value = detail::binomial_tail(n - 1, 0, r - 1, theta0);
            out.trace = "P(N >= " + std::to_string(n) + "; theta0=" +
                        compact_double(hyp.null_value) + ") under " + model.describe();
          } else {
            out.p_value = Rational(1) - detail::binomial_tail(n, 0, r - 1, theta0);
            out.trace = "P(N <= " + std::to_string(n) + "; theta0=" +
                        compact_double(hyp.null_value) + ") under " + model.describe();
          }
        } else if constexpr (std::is_same_v<M, NormalFixedN>) {
          const auto& ns = *outcome.get_if<NormalSummary>();
          const double z =
              std::sqrt(static_cast<double>(ns.sample_size)) * (ns.mean - hyp.null_value) / m.sigma;
          const double p =
              (hyp.direction == Direction::greater) ? norm_upper_tail(z) : norm_cdf(z);
          out.p_value = Real(p);
          out.trace = std::string(hyp.direction == Direction::greater ? "1 - Phi(" : "Phi(") +
                      compact_double(z) + ") under " + model.describe();
          if (p == 0.0) out.trace += " (tail underflows double precision, < 1e-300)";
        } else if constexpr (std::is_same_v<M, NormalOptionalStopping>) {
          throw invalid_input(
              "p_value: no closed-form sampling distribution under optional stopping; "
              "use stop_fraction to assess it by simulation");
        } else {
          throw invalid_input(
              "p_value: " + model.describe() +
              " is not a component experiment; use mixture_conditional / "
              "mixture_unconditional or the audit operations");
        }
      },
      model.variant());
  return out;
}

/// The unconditional (pre-randomizer) assessment of a two-component
/// mixture: the convex combination of the component p-values.
inline EvidenceAssessment mixture_unconditional(const Real& p_first, const Real& p_second,
                                                double weight_first) {
  require(p_first.value() >= 0.0 && p_first.value() <= 1.0 && p_second.value() >= 0.0 &&
              p_second.value() <= 1.0,
          "mixture_unconditional: p-values must lie in [0,1]");
  require(weight_first > 0.0 && weight_first < 1.0,
          "mixture_unconditional: weight must lie in (0,1)");
  const Rational w = rational_from_double(weight_first);
  EvidenceAssessment out;
  out.p_value = Real(w) * p_first + Real(1 - w) * p_second;
  out.distribution_used = SamplingDistribution::mixture_unconditional;
  out.source = "mixture{w=" + compact_double(weight_first) + "}";
  out.trace = compact_double(weight_first) + " * " + p_first.describe() + " + " +
              compact_double(1.0 - weight_first) + " * " + p_second.describe();
  return out;
}

/// The conditional assessment of a mixture outcome: once the randomizer
/// value j is known, the p-value is computed from component j's own
/// sampling distribution and coincides with the standalone assessment.
inline EvidenceAssessment mixture_conditional(const ExperimentModel& mixture, const Outcome& obs,
                                              const HypothesisSpec& hyp) {
  require(mixture.get_if<Mixture>() != nullptr, "mixture_conditional: model must be a Mixture");
  const auto* mo = obs.get_if<MixtureOutcome>();
  require(mo != nullptr, "mixture_conditional: outcome must carry the component index j");
  const ExperimentModel& component = mixture_component(mixture, mo->component);
  EvidenceAssessment out = p_value(component, *mo->inner, hyp);
  out.source = "(" + mixture.describe() + ", " + obs.describe() + ")";
  out.trace = "conditioned on randomizer outcome j=" + std::to_string(mo->component) + "; " +
              out.trace;
  return out;
}

/// The evidential-equivalence relation, realized as equality of p-values
/// computed under the same methodology: exact when both sides are exact,
/// else within 1e-12 absolute.
inline bool evidence_equivalent(const EvidenceAssessment& a, const EvidenceAssessment& b) {
  if (a.p_value.is_exact() && b.p_value.is_exact()) {
    return a.p_value.rational() == b.p_value.rational();
  }
  return std::fabs(a.p_value.value() - b.p_value.value()) <= kEvidenceTolerance;
}

}  // namespace slplab
