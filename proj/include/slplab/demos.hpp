#pragma once

#include <map>
#include <set>
#include <string>

#include "slplab/report.hpp"

namespace slplab {

namespace detail {

inline const std::string* find_option(const std::map<std::string, std::string>& options,
                                      const std::string& key) {
  const auto it = options.find(key);
  return it == options.end() ? nullptr : &it->second;
}

inline double opt_double(const std::map<std::string, std::string>& options,
                         const std::string& key, double fallback) {
  const auto* raw = find_option(options, key);
  if (raw == nullptr) return fallback;
  try {
    std::size_t used = 0;
    const double v = std::stod(*raw, &used);
    require(used == raw->size() && std::isfinite(v), "");
    return v;
  } catch (const std::exception&) {
    throw invalid_input("option " + key + ": malformed number '" + *raw + "'");
  }
}

inline int opt_int(const std::map<std::string, std::string>& options, const std::string& key,
                   int fallback) {
  const auto* raw = find_option(options, key);
  if (raw == nullptr) return fallback;
  try {
    std::size_t used = 0;
    const int v = std::stoi(*raw, &used);
    require(used == raw->size(), "");
    return v;
  } catch (const std::exception&) {
    throw invalid_input("option " + key + ": malformed integer '" + *raw + "'");
  }
}

inline std::uint64_t opt_seed(const std::map<std::string, std::string>& options) {
  const auto* raw = find_option(options, "seed");
  if (raw == nullptr) return kDefaultSeed;
  try {
    std::size_t used = 0;
    const std::uint64_t v = std::stoull(*raw, &used);
    require(used == raw->size(), "");
    return v;
  } catch (const std::exception&) {
    throw invalid_input("option seed: malformed integer '" + *raw + "'");
  }
}

inline Direction opt_direction(const std::map<std::string, std::string>& options,
                               Direction fallback) {
  const auto* raw = find_option(options, "direction");
  if (raw == nullptr) return fallback;
  if (*raw == "less") return Direction::less;
  if (*raw == "greater") return Direction::greater;
  throw invalid_input("option direction: expected less|greater, got '" + *raw + "'");
}

/// Exact parse of a parameter written as "p/q", an integer, or a finite
/// decimal ("0.1" means exactly 1/10).
inline Rational opt_exact(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash != std::string::npos) {
      return Rational(integer_from_decimal_string(text.substr(0, slash)),
                      integer_from_decimal_string(text.substr(slash + 1)));
    }
    const auto dot = text.find('.');
    if (dot == std::string::npos) return Rational(integer_from_decimal_string(text));
    const Rational value{integer_from_decimal_string(text.substr(0, dot) + text.substr(dot + 1))};
    return value / pow_rational(Rational(10), static_cast<unsigned>(text.size() - dot - 1));
  } catch (const invalid_input&) {
    throw;
  } catch (const std::exception&) {
    throw invalid_input("malformed exact parameter '" + text + "'");
  }
}

inline std::vector<Rational> opt_params(const std::map<std::string, std::string>& options,
                                        const std::string& fallback) {
  const auto* raw = find_option(options, "params");
  std::string text = raw != nullptr ? *raw : fallback;
  std::vector<Rational> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const std::string piece =
        text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    require(!piece.empty(), "option params: empty entry");
    out.push_back(opt_exact(piece));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

inline void reject_unknown_options(const std::map<std::string, std::string>& options,
                                   const std::set<std::string>& known) {
  for (const auto& [key, value] : options) {
    require(known.contains(key), "unknown option '" + key + "' for this demo");
  }
}

inline std::string bool_string(bool b) { return b ? "true" : "false"; }

inline SlpPair example1_pair(int trials, int successes) {
  const ExperimentOutcome binomial{ExperimentModel::binomial(trials),
                                   Outcome::summary(successes, trials)};
  const ExperimentOutcome neg_binomial{ExperimentModel::neg_binomial(successes),
                                       Outcome::summary(successes, trials)};
  std::vector<double> grid;
  for (int i = 1; i <= 11; ++i) grid.push_back(i / 12.0);
  auto pair = check_slp_pair(binomial, neg_binomial, grid);
  ensure(pair.has_value(), "binomial/negative-binomial records failed the SLP-pair check");
  return *pair;
}

inline SemanticsAssignment parse_semantics(const std::string& text) {
  const auto comma = text.find(',');
  require(comma != std::string::npos,
          "option semantics: expected '<premise1>,<premise2>', e.g. 'unconditional,conditional'");
  SemanticsAssignment sem;
  sem.premise1 = premise_semantics_from_string(text.substr(0, comma));
  sem.premise2 = premise_semantics_from_string(text.substr(comma + 1));
  return sem;
}

}  // namespace detail

/// Runs one named demonstration and returns its Report. Demos are
/// deterministic for fixed options and seed.
inline Report run_demo(const std::string& name,
                       const std::map<std::string, std::string>& options) {
  Report report;
  report.demo_name = name;

  if (name == "example1") {
    detail::reject_unknown_options(options, {"theta0", "direction", "n", "r"});
    const int trials = detail::opt_int(options, "n", 20);
    const int successes = detail::opt_int(options, "r", 6);
    const double theta0 = detail::opt_double(options, "theta0", 0.5);
    const HypothesisSpec hyp{theta0, detail::opt_direction(options, Direction::less)};
    const SlpPair pair = detail::example1_pair(trials, successes);

    report.inputs = {{"n", std::to_string(trials)},
                     {"r", std::to_string(successes)},
                     {"theta0", compact_double(theta0)},
                     {"direction", to_string(hyp.direction)}};
    auto p_binomial = p_value(pair.first.model, pair.first.outcome, hyp);
    auto p_neg_binomial = p_value(pair.second.model, pair.second.outcome, hyp);
    report.results["likelihood_ratio_c"] = pair.constant.describe();
    report.results["slp_violation"] =
        detail::bool_string(!evidence_equivalent(p_binomial, p_neg_binomial));
    report.assessments = {std::move(p_binomial), std::move(p_neg_binomial)};
    return report;
  }

  if (name == "example2") {
    detail::reject_unknown_options(options, {"sigma", "n_max", "reps", "seed", "mu0"});
    const double sigma = detail::opt_double(options, "sigma", 1.0);
    const int n_max = detail::opt_int(options, "n_max", 169);
    const int reps = detail::opt_int(options, "reps", 10000);
    const std::uint64_t seed = detail::opt_seed(options);
    const double mu0 = detail::opt_double(options, "mu0", 0.0);

    report.inputs = {{"sigma", compact_double(sigma)},
                     {"n_max", std::to_string(n_max)},
                     {"reps", std::to_string(reps)},
                     {"seed", std::to_string(seed)},
                     {"mu0", compact_double(mu0)}};
    const SlpPair pair = slp_partner_for_stop(n_max, sigma);
    auto boundary_p = p_value(pair.first.model, pair.first.outcome,
                              HypothesisSpec{mu0, Direction::greater});
    const StoppingStudy study = stop_fraction(sigma, n_max, reps, seed);
    const double nominal = boundary_p.p_value.value();
    const double empirical = study.final_fraction();
    report.results["fixed_n_boundary_p"] = compact_double(nominal);
    report.results["empirical_stop_fraction"] = compact_double(empirical);
    report.results["standard_error"] = compact_double(study.standard_error);
    report.results["exceeds_nominal_by_5se"] =
        detail::bool_string(empirical > nominal + 5.0 * study.standard_error);
    report.results["likelihood_ratio_c"] = pair.constant.describe();
    report.assessments = {std::move(boundary_p)};
    report.studies = {study};
    return report;
  }

  if (name == "example3") {
    detail::reject_unknown_options(options,
                                   {"xbar", "j", "mu0", "weight", "direction",
                                    "sigma_first", "sigma_second"});
    const double sigma_first = detail::opt_double(options, "sigma_first", 0.01);   // variance 1e-4
    const double sigma_second = detail::opt_double(options, "sigma_second", 100.0);  // variance 1e4
    const double xbar = detail::opt_double(options, "xbar", 3.9);
    const int j = detail::opt_int(options, "j", 2);
    const double weight = detail::opt_double(options, "weight", 0.5);
    const HypothesisSpec hyp{detail::opt_double(options, "mu0", 0.0),
                             detail::opt_direction(options, Direction::greater)};

    const ExperimentModel mix =
        ExperimentModel::mixture(weight, ExperimentModel::normal_fixed_n(1, sigma_first),
                                 ExperimentModel::normal_fixed_n(1, sigma_second));
    const Outcome measurement = Outcome::normal_summary(xbar, 1);
    const Outcome obs = Outcome::mixture(j, measurement);

    report.inputs = {{"sigma_first", compact_double(sigma_first)},
                     {"sigma_second", compact_double(sigma_second)},
                     {"xbar", compact_double(xbar)},
                     {"j", std::to_string(j)},
                     {"weight", compact_double(weight)},
                     {"mu0", compact_double(hyp.null_value)},
                     {"direction", to_string(hyp.direction)}};
    auto conditional = mixture_conditional(mix, obs, hyp);
    const auto p_first = p_value(mixture_component(mix, 1), measurement, hyp);
    const auto p_second = p_value(mixture_component(mix, 2), measurement, hyp);
    auto unconditional = mixture_unconditional(p_first.p_value, p_second.p_value, weight);
    report.results["p_first_component"] = p_first.p_value.describe();
    report.results["p_second_component"] = p_second.p_value.describe();
    report.results["conditional_vs_unconditional_differ"] =
        detail::bool_string(!evidence_equivalent(conditional, unconditional));
    report.assessments = {std::move(conditional), std::move(unconditional)};
    return report;
  }

  if (name == "example4") {
    detail::reject_unknown_options(options, {"sigma", "stop_n", "weight", "mu0"});
    const double sigma = detail::opt_double(options, "sigma", 1.0);
    const int stop_n = detail::opt_int(options, "stop_n", 169);
    const double weight = detail::opt_double(options, "weight", 0.5);
    const HypothesisSpec hyp{detail::opt_double(options, "mu0", 0.0), Direction::greater};

    const SlpPair pair = slp_partner_for_stop(stop_n, sigma);
    const BirnbaumExperiment eb = birnbaumize(pair, weight);
    // The optional-stopping record is the one observed; T-B erases its index.
    const TBValue tb = tb_statistic(eb, 2, pair.second.outcome);

    report.inputs = {{"sigma", compact_double(sigma)},
                     {"stop_n", std::to_string(stop_n)},
                     {"weight", compact_double(weight)},
                     {"mu0", compact_double(hyp.null_value)}};
    auto conditional = infr_conditional(eb, 1, pair.first.outcome, hyp);
    report.results["tb_report"] = describe(eb, tb);
    report.results["collapses_observed_stop"] = detail::bool_string(tb.is_collapsed());
    report.results["collapses_fixed_n_member"] =
        detail::bool_string(tb_statistic(eb, 1, pair.first.outcome).is_collapsed());
    report.results["likelihood_ratio_c"] = pair.constant.describe();
    report.results["unconditional_assessment"] =
        "not analytic: the optional-stopping member has no closed-form p-value; "
        "assess it by simulation (example2)";
    report.assessments = {std::move(conditional)};
    return report;
  }

  if (name == "audit") {
    detail::reject_unknown_options(options,
                                   {"theta0", "direction", "n", "r", "weight", "semantics",
                                    "order"});
    const int trials = detail::opt_int(options, "n", 20);
    const int successes = detail::opt_int(options, "r", 6);
    const double weight = detail::opt_double(options, "weight", 0.5);
    const HypothesisSpec hyp{detail::opt_double(options, "theta0", 0.5),
                             detail::opt_direction(options, Direction::less)};
    const SlpPair pair = detail::example1_pair(trials, successes);

    report.inputs = {{"n", std::to_string(trials)},
                     {"r", std::to_string(successes)},
                     {"theta0", compact_double(hyp.null_value)},
                     {"direction", to_string(hyp.direction)},
                     {"weight", compact_double(weight)}};

    std::vector<SemanticsAssignment> assignments;
    if (const auto* text = detail::find_option(options, "semantics")) {
      assignments.push_back(detail::parse_semantics(*text));
    } else {
      assignments = {{PremiseSemantics::unconditional, PremiseSemantics::conditional},
                     {PremiseSemantics::unconditional, PremiseSemantics::unconditional},
                     {PremiseSemantics::conditional, PremiseSemantics::conditional}};
    }
    if (const auto* order = detail::find_option(options, "order")) {
      for (auto& sem : assignments) {
        sem.evaluation_order = detail::evaluation_order_from_string(*order);
      }
    }
    for (const auto& sem : assignments) report.verdicts.push_back(audit(pair, hyp, sem, weight));
    report.assessments = {p_value(pair.first.model, pair.first.outcome, hyp),
                          p_value(pair.second.model, pair.second.outcome, hyp)};
    report.results["likelihood_ratio_c"] = pair.constant.describe();
    return report;
  }

  if (name == "factorize") {
    detail::reject_unknown_options(options, {"model", "n", "r", "max_n", "params"});
    const auto* model_name = detail::find_option(options, "model");
    const std::string which = model_name != nullptr ? *model_name : "binomial";
    const std::vector<Rational> params = detail::opt_params(options, "0.1,0.5,0.9");

    FactorizationOptions fopts;
    ExperimentModel model = ExperimentModel::binomial(1);
    if (which == "binomial") {
      model = ExperimentModel::binomial(detail::opt_int(options, "n", 12));
    } else if (which == "negbinomial") {
      model = ExperimentModel::neg_binomial(detail::opt_int(options, "r", 6));
      fopts.neg_binomial_max_trials = detail::opt_int(options, "max_n", 20);
    } else {
      throw invalid_input("option model: expected binomial|negbinomial, got '" + which + "'");
    }

    report.inputs["model"] = model.describe();
    std::string param_text;
    for (const auto& p : params) {
      if (!param_text.empty()) param_text += ",";
      param_text += rational_to_string(p);
    }
    report.inputs["params"] = param_text;
    if (which == "negbinomial") {
      report.inputs["max_n"] = std::to_string(fopts.neg_binomial_max_trials);
    }
    report.factorizations = {verify_factorization(model, params, fopts)};
    report.results["pass"] = detail::bool_string(report.factorizations.front().pass);
    return report;
  }

  if (name == "simulate-stopping") {
    detail::reject_unknown_options(options, {"sigma", "n_max", "reps", "seed"});
    const double sigma = detail::opt_double(options, "sigma", 1.0);
    const int n_max = detail::opt_int(options, "n_max", 169);
    const int reps = detail::opt_int(options, "reps", 10000);
    const std::uint64_t seed = detail::opt_seed(options);

    report.inputs = {{"sigma", compact_double(sigma)},
                     {"n_max", std::to_string(n_max)},
                     {"reps", std::to_string(reps)},
                     {"seed", std::to_string(seed)}};
    const StoppingStudy study = stop_fraction(sigma, n_max, reps, seed);
    report.results["final_fraction"] = compact_double(study.final_fraction());
    report.results["standard_error"] = compact_double(study.standard_error);
    report.studies = {study};
    return report;
  }

  throw invalid_input("unknown demo '" + name +
                      "' (expected example1, example2, example3, example4, audit, factorize, "
                      "or simulate-stopping)");
}

}  // namespace slplab
