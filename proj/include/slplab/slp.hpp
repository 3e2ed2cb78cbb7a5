#pragma once

#include <optional>
#include <vector>

#include "slplab/likelihood.hpp"

namespace slplab {

inline constexpr double kRatioSpreadTolerance = 1e-12;

namespace detail {

inline void check_grid(ParameterSpace space, const std::vector<double>& grid) {
  require(!grid.empty(), "check_slp_pair: parameter grid must be nonempty");
  for (double p : grid) {
    if (space == ParameterSpace::bernoulli_theta) {
      require(p > 0.0 && p < 1.0, "check_slp_pair: grid point outside (0,1)");
    } else {
      require(std::isfinite(p), "check_slp_pair: grid point must be finite");
    }
  }
}

}  // namespace detail

/// Decides whether two (experiment, outcome) records form an SLP pair:
/// likelihood(a; theta) = c * likelihood(b; theta) for all theta. For
/// Bernoulli-family records the decision is exact (kernel exponents and
/// constants); otherwise the pmf ratio must be constant on the grid to
/// within 1e-12 relative spread. Returns the pair with its constant, or
/// nullopt when the likelihoods are not proportional. Grid points where
/// either pmf fails to be strictly positive are rejected as input.
inline std::optional<SlpPair> check_slp_pair(const ExperimentOutcome& a,
                                             const ExperimentOutcome& b,
                                             const std::vector<double>& grid) {
  require(a.model.parameter_space() == b.model.parameter_space(),
          "check_slp_pair: mismatched parameter spaces");
  detail::check_grid(a.model.parameter_space(), grid);
  validate_outcome(a.model, a.outcome);
  validate_outcome(b.model, b.outcome);

  const LikelihoodKernel ka = likelihood_kernel(a.model, a.outcome);
  const LikelihoodKernel kb = likelihood_kernel(b.model, b.outcome);

  if (ka.is_bernoulli() && kb.is_bernoulli()) {
    if (!ka.proportional_to(kb)) return std::nullopt;
    return SlpPair{a, b, Real(ka.bernoulli().constant / kb.bernoulli().constant)};
  }

  std::vector<double> ratios;
  ratios.reserve(grid.size());
  for (double p : grid) {
    const double fa = pmf(a.model, a.outcome, p).value();
    const double fb = pmf(b.model, b.outcome, p).value();
    require(fa > 0.0 && fb > 0.0 && std::isfinite(fa) && std::isfinite(fb),
            "check_slp_pair: pmf not strictly positive and finite at a grid point");
    ratios.push_back(fa / fb);
  }
  const double c = ratios.front();
  for (double r : ratios) {
    if (std::fabs(r - c) > kRatioSpreadTolerance * std::fabs(c)) return std::nullopt;
  }
  return SlpPair{a, b, Real(c)};
}

}  // namespace slplab
