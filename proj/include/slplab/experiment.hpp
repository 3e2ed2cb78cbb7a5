#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "slplab/rational.hpp"

namespace slplab {

struct SlpPair;  // defined below, after ExperimentModel and Outcome

/// The two parameter families in the catalog: Bernoulli success
/// probability theta in (0,1), or a normal mean mu with sigma known.
enum class ParameterSpace { bernoulli_theta, normal_mean };

inline std::string to_string(ParameterSpace space) {
  return space == ParameterSpace::bernoulli_theta ? "bernoulli-theta" : "normal-mean";
}

class ExperimentModel;

struct Binomial {
  int trials = 0;  // pre-assigned number of Bernoulli trials
};

struct NegBinomial {
  int target_successes = 0;  // sampling continues until this many successes
};

struct NormalFixedN {
  int sample_size = 0;
  double sigma = 1.0;
};

struct NormalOptionalStopping {
  double sigma = 1.0;
  int max_trials = 0;  // truncation of the open-ended stopping rule
};

struct Mixture {
  double weight_first = 0.5;
  std::shared_ptr<const ExperimentModel> first;
  std::shared_ptr<const ExperimentModel> second;
};

/// The enlarged experiment built on an SLP pair: an equal-probability
/// (or weighted) hypothetical mixture whose components are the two pair
/// members' experiments.
struct Birnbaumized {
  std::shared_ptr<const SlpPair> pair;
  double weight_first = 0.5;
};

class ExperimentModel {
 public:
  using Variant = std::variant<Binomial, NegBinomial, NormalFixedN,
                               NormalOptionalStopping, Mixture, Birnbaumized>;

  static ExperimentModel binomial(int trials) {
    require(trials >= 1, "Binomial: trials must be >= 1");
    return ExperimentModel(Binomial{trials});
  }

  static ExperimentModel neg_binomial(int target_successes) {
    require(target_successes >= 1, "NegBinomial: target successes must be >= 1");
    return ExperimentModel(NegBinomial{target_successes});
  }

  static ExperimentModel normal_fixed_n(int sample_size, double sigma) {
    require(sample_size >= 1, "NormalFixedN: sample size must be >= 1");
    require(sigma > 0.0 && std::isfinite(sigma), "NormalFixedN: sigma must be positive");
    return ExperimentModel(NormalFixedN{sample_size, sigma});
  }

  static ExperimentModel normal_optional_stopping(double sigma, int max_trials) {
    require(sigma > 0.0 && std::isfinite(sigma), "NormalOptionalStopping: sigma must be positive");
    require(max_trials >= 1, "NormalOptionalStopping: max trials must be >= 1");
    return ExperimentModel(NormalOptionalStopping{sigma, max_trials});
  }

  static ExperimentModel mixture(double weight_first, ExperimentModel first,
                                 ExperimentModel second) {
    require(weight_first > 0.0 && weight_first < 1.0, "Mixture: weight must lie in (0,1)");
    require(first.parameter_space() == second.parameter_space(),
            "Mixture: components must share a parameter space");
    return ExperimentModel(
        Mixture{weight_first, std::make_shared<const ExperimentModel>(std::move(first)),
                std::make_shared<const ExperimentModel>(std::move(second))});
  }

  static ExperimentModel birnbaumized(SlpPair pair, double weight_first = 0.5);

  const Variant& variant() const { return v_; }

  template <class T>
  const T* get_if() const {
    return std::get_if<T>(&v_);
  }

  ParameterSpace parameter_space() const;
  std::string describe() const;

 private:
  explicit ExperimentModel(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

// ---------------------------------------------------------------------------

struct BernoulliSeq {
  std::vector<std::uint8_t> bits;  // ordered 0/1 trial results
};

struct BernoulliSummary {
  int successes = 0;
  int trials = 0;
};

struct NormalSummary {
  double mean = 0.0;
  int sample_size = 0;
};

class Outcome;

struct MixtureOutcome {
  int component = 1;  // randomizer value j in {1,2}
  std::shared_ptr<const Outcome> inner;
};

class Outcome {
 public:
  using Variant = std::variant<BernoulliSeq, BernoulliSummary, NormalSummary, MixtureOutcome>;

  static Outcome sequence(std::vector<int> bits) {
    require(!bits.empty(), "Outcome: empty trial sequence");
    BernoulliSeq seq;
    seq.bits.reserve(bits.size());
    for (int b : bits) {
      require(b == 0 || b == 1, "Outcome: sequence entries must be 0 or 1");
      seq.bits.push_back(static_cast<std::uint8_t>(b));
    }
    return Outcome(std::move(seq));
  }

  static Outcome summary(int successes, int trials) {
    require(trials >= 1, "Outcome: trials must be >= 1");
    require(successes >= 0 && successes <= trials,
            "Outcome: successes must lie in [0, trials]");
    return Outcome(BernoulliSummary{successes, trials});
  }

  static Outcome normal_summary(double mean, int sample_size) {
    require(std::isfinite(mean), "Outcome: non-finite sample mean");
    require(sample_size >= 1, "Outcome: sample size must be >= 1");
    return Outcome(NormalSummary{mean, sample_size});
  }

  static Outcome mixture(int component, Outcome inner) {
    require(component == 1 || component == 2, "Outcome: component index must be 1 or 2");
    return Outcome(MixtureOutcome{component, std::make_shared<const Outcome>(std::move(inner))});
  }

  const Variant& variant() const { return v_; }

  template <class T>
  const T* get_if() const {
    return std::get_if<T>(&v_);
  }

  std::string describe() const;

  friend bool operator==(const Outcome& a, const Outcome& b) {
    return std::visit(
        [](const auto& x, const auto& y) -> bool {
          using X = std::decay_t<decltype(x)>;
          using Y = std::decay_t<decltype(y)>;
          if constexpr (!std::is_same_v<X, Y>) {
            return false;
          } else if constexpr (std::is_same_v<X, BernoulliSeq>) {
            return x.bits == y.bits;
          } else if constexpr (std::is_same_v<X, BernoulliSummary>) {
            return x.successes == y.successes && x.trials == y.trials;
          } else if constexpr (std::is_same_v<X, NormalSummary>) {
            return x.mean == y.mean && x.sample_size == y.sample_size;
          } else {
            return x.component == y.component && *x.inner == *y.inner;
          }
        },
        a.v_, b.v_);
  }
  friend bool operator!=(const Outcome& a, const Outcome& b) { return !(a == b); }

 private:
  explicit Outcome(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

// ---------------------------------------------------------------------------

struct ExperimentOutcome {
  ExperimentModel model;
  Outcome outcome;

  std::string describe() const {
    return "(" + model.describe() + ", " + outcome.describe() + ")";
  }
};

/// Two (experiment, outcome) records whose likelihoods satisfy
/// likelihood(first; theta) = constant * likelihood(second; theta) for
/// every theta in the shared parameter space.
struct SlpPair {
  ExperimentOutcome first;
  ExperimentOutcome second;
  Real constant;
};

inline ExperimentModel ExperimentModel::birnbaumized(SlpPair pair, double weight_first) {
  require(weight_first > 0.0 && weight_first < 1.0, "Birnbaumized: weight must lie in (0,1)");
  require(pair.first.model.parameter_space() == pair.second.model.parameter_space(),
          "Birnbaumized: pair members must share a parameter space");
  return ExperimentModel(
      Birnbaumized{std::make_shared<const SlpPair>(std::move(pair)), weight_first});
}

inline ParameterSpace ExperimentModel::parameter_space() const {
  return std::visit(
      [](const auto& m) -> ParameterSpace {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Binomial> || std::is_same_v<T, NegBinomial>) {
          return ParameterSpace::bernoulli_theta;
        } else if constexpr (std::is_same_v<T, NormalFixedN> ||
                             std::is_same_v<T, NormalOptionalStopping>) {
          return ParameterSpace::normal_mean;
        } else if constexpr (std::is_same_v<T, Mixture>) {
          return m.first->parameter_space();
        } else {
          return m.pair->first.model.parameter_space();
        }
      },
      v_);
}

inline std::string ExperimentModel::describe() const {
  return std::visit(
      [](const auto& m) -> std::string {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Binomial>) {
          return "Binomial{n=" + std::to_string(m.trials) + "}";
        } else if constexpr (std::is_same_v<T, NegBinomial>) {
          return "NegBinomial{r=" + std::to_string(m.target_successes) + "}";
        } else if constexpr (std::is_same_v<T, NormalFixedN>) {
          return "NormalFixedN{n=" + std::to_string(m.sample_size) +
                 ", sigma=" + compact_double(m.sigma) + "}";
        } else if constexpr (std::is_same_v<T, NormalOptionalStopping>) {
          return "NormalOptionalStopping{sigma=" + compact_double(m.sigma) +
                 ", n_max=" + std::to_string(m.max_trials) + "}";
        } else if constexpr (std::is_same_v<T, Mixture>) {
          return "Mixture{w=" + compact_double(m.weight_first) + "; " + m.first->describe() +
                 "; " + m.second->describe() + "}";
        } else {
          return "Birnbaumized{w=" + compact_double(m.weight_first) + "; " +
                 m.pair->first.model.describe() + " | " + m.pair->second.model.describe() + "}";
        }
      },
      v_);
}

inline std::string Outcome::describe() const {
  return std::visit(
      [](const auto& o) -> std::string {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, BernoulliSeq>) {
          std::string bits;
          bits.reserve(o.bits.size());
          for (auto b : o.bits) bits.push_back(b ? '1' : '0');
          return "seq[" + bits + "]";
        } else if constexpr (std::is_same_v<T, BernoulliSummary>) {
          return "r=" + std::to_string(o.successes) + "/n=" + std::to_string(o.trials);
        } else if constexpr (std::is_same_v<T, NormalSummary>) {
          return "xbar=" + compact_double(o.mean) + ", n=" + std::to_string(o.sample_size);
        } else {
          return "(j=" + std::to_string(o.component) + ", " + o.inner->describe() + ")";
        }
      },
      v_);
}

/// Component j of a mixture-structured model (Mixture or Birnbaumized).
inline const ExperimentModel& mixture_component(const ExperimentModel& model, int component) {
  require(component == 1 || component == 2, "component index must be 1 or 2");
  if (const auto* mix = model.get_if<Mixture>()) {
    return component == 1 ? *mix->first : *mix->second;
  }
  if (const auto* eb = model.get_if<Birnbaumized>()) {
    return component == 1 ? eb->pair->first.model : eb->pair->second.model;
  }
  throw invalid_input("mixture_component: model has no mixture structure: " + model.describe());
}

inline double mixture_weight(const ExperimentModel& model, int component) {
  double w = 0.0;
  if (const auto* mix = model.get_if<Mixture>()) {
    w = mix->weight_first;
  } else if (const auto* eb = model.get_if<Birnbaumized>()) {
    w = eb->weight_first;
  } else {
    throw invalid_input("mixture_weight: model has no mixture structure");
  }
  return component == 1 ? w : 1.0 - w;
}

/// Exact component weight. The complement is 1 - w in rational
/// arithmetic, so the two weights always sum to exactly one.
inline Rational mixture_weight_exact(const ExperimentModel& model, int component) {
  const Rational first = rational_from_double(mixture_weight(model, 1));
  return component == 1 ? first : 1 - first;
}

}  // namespace slplab
