#pragma once

#include <string>
#include <utility>
#include <vector>

#include "slplab/evidence.hpp"
#include "slplab/slp.hpp"

namespace slplab {

/// The enlarged experiment built on an SLP pair: components are the two
/// pair members' experiments, selected with probability weight_first /
/// 1 - weight_first by a randomizer independent of the parameter.
struct BirnbaumExperiment {
  SlpPair pair;
  double weight_first = 0.5;
};

/// Remodels an SLP pair as the hypothetical mixture E-B. Re-checks the
/// pair's proportionality invariant and that the two weighted member
/// likelihoods w*f(x'; theta) and w*f(x''; theta) stay proportional.
inline BirnbaumExperiment birnbaumize(const SlpPair& pair, double weight_first = 0.5) {
  require(weight_first > 0.0 && weight_first < 1.0, "birnbaumize: weight must lie in (0,1)");
  require(pair.first.model.parameter_space() == pair.second.model.parameter_space(),
          "birnbaumize: pair members must share a parameter space");
  const LikelihoodKernel first = likelihood_kernel(pair.first.model, pair.first.outcome);
  const LikelihoodKernel second = likelihood_kernel(pair.second.model, pair.second.outcome);
  require(first.proportional_to(second),
          "birnbaumize: member likelihoods are not proportional; not an SLP pair");
  return BirnbaumExperiment{pair, weight_first};
}

/// Value of the index-erasing statistic T-B on the enlarged experiment:
/// both designated pair members map to one canonical report (the first
/// member's record); every other outcome passes through with its index.
class TBValue {
 public:
  static TBValue collapsed() { return TBValue(); }
  static TBValue plain(int component, Outcome outcome) {
    TBValue v;
    v.collapsed_ = false;
    v.component_ = component;
    v.outcome_ = std::move(outcome);
    return v;
  }

  bool is_collapsed() const { return collapsed_; }
  int component() const {
    ensure(!collapsed_, "TBValue: collapsed value carries no index");
    return component_;
  }
  const Outcome& outcome() const {
    ensure(!collapsed_ && outcome_.has_value(), "TBValue: collapsed value carries no outcome");
    return *outcome_;
  }

 private:
  TBValue() = default;
  bool collapsed_ = true;
  int component_ = 0;
  std::optional<Outcome> outcome_;
};

inline std::string describe(const BirnbaumExperiment& eb, const TBValue& tb) {
  if (tb.is_collapsed()) {
    return "T-B = canonical " + eb.pair.first.describe() + " (index erased)";
  }
  return "T-B = (j=" + std::to_string(tb.component()) + ", " + tb.outcome().describe() +
         ") (index preserved)";
}

/// Applies T-B to the observation (j, outcome). Matching against the
/// designated members is at the canonical (summary) level, so a trial
/// sequence collapses exactly when its sufficient reduction equals the
/// member's.
inline TBValue tb_statistic(const BirnbaumExperiment& eb, int component, const Outcome& outcome) {
  require(component == 1 || component == 2, "tb_statistic: component index must be 1 or 2");
  const ExperimentOutcome& member = (component == 1) ? eb.pair.first : eb.pair.second;
  const Outcome canon = canonical_outcome(member.model, outcome);
  if (canon == canonical_outcome(member.model, member.outcome)) return TBValue::collapsed();
  return TBValue::plain(component, outcome);
}

/// Premise-one reading of Infr_{E-B}: average over the unconditional
/// sampling distribution of T-B. A collapsed value is assessed as the
/// convex combination of the two members' component p-values, whichever
/// member was actually observed. A plain value keeps its index and is
/// assessed at its component p-value, flagged index_preserved.
inline EvidenceAssessment infr_unconditional(const BirnbaumExperiment& eb, const TBValue& tb,
                                             const HypothesisSpec& hyp) {
  if (tb.is_collapsed()) {
    const EvidenceAssessment p1 = p_value(eb.pair.first.model, eb.pair.first.outcome, hyp);
    const EvidenceAssessment p2 = p_value(eb.pair.second.model, eb.pair.second.outcome, hyp);
    const Rational w = rational_from_double(eb.weight_first);
    EvidenceAssessment out;
    out.p_value = Real(w) * p1.p_value + Real(1 - w) * p2.p_value;
    out.distribution_used = SamplingDistribution::birnbaum_unconditional;
    out.source = describe(eb, tb);
    out.trace = compact_double(eb.weight_first) + " * " + p1.p_value.describe() + " + " +
                compact_double(1.0 - eb.weight_first) + " * " + p2.p_value.describe() +
                " over the T-B sampling distribution";
    return out;
  }
  const ExperimentOutcome& member = (tb.component() == 1) ? eb.pair.first : eb.pair.second;
  EvidenceAssessment out = p_value(member.model, tb.outcome(), hyp);
  out.distribution_used = SamplingDistribution::birnbaum_unconditional;
  out.source = describe(eb, tb);
  out.trace = "non-pair outcome; T-B preserved the index, p-value is the component's; " +
              out.trace;
  out.index_preserved = true;
  return out;
}

/// Premise-two reading of Infr_{E-B}: once (j, outcome) is known, assess
/// with the sampling distribution of component j alone.
inline EvidenceAssessment infr_conditional(const BirnbaumExperiment& eb, int component,
                                           const Outcome& outcome, const HypothesisSpec& hyp) {
  require(component == 1 || component == 2, "infr_conditional: component index must be 1 or 2");
  const ExperimentOutcome& member = (component == 1) ? eb.pair.first : eb.pair.second;
  EvidenceAssessment out = p_value(member.model, outcome, hyp);
  out.trace = "conditioned on the experiment known to have run (j=" +
              std::to_string(component) + "); " + out.trace;
  return out;
}

// ---------------------------------------------------------------------------

enum class PremiseSemantics { unconditional, conditional };

inline std::string to_string(PremiseSemantics s) {
  return s == PremiseSemantics::unconditional ? "unconditional" : "conditional";
}

enum class EvaluationOrder { premise1_first, premise2_first };

inline std::string to_string(EvaluationOrder o) {
  return o == EvaluationOrder::premise1_first ? "p1-first" : "p2-first";
}

/// Which sampling distribution each premise's Infr_{E-B} refers to, and
/// in which order the premises are evaluated.
struct SemanticsAssignment {
  PremiseSemantics premise1 = PremiseSemantics::unconditional;
  PremiseSemantics premise2 = PremiseSemantics::conditional;
  EvaluationOrder evaluation_order = EvaluationOrder::premise1_first;

  friend bool operator==(const SemanticsAssignment&, const SemanticsAssignment&) = default;
};

enum class Verdict { invalid, blocked_at_premise_1, blocked_at_premise_2, no_violation };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::invalid: return "invalid";
    case Verdict::blocked_at_premise_1: return "blocked-at-premise-1";
    case Verdict::blocked_at_premise_2: return "blocked-at-premise-2";
    case Verdict::no_violation: return "no-violation";
  }
  throw internal_error("unknown verdict");
}

struct PremiseFinding {
  bool holds = false;
  // Left/right assessments whose equivalence the premise asserts; one
  // witness pair for premise one, one per component for premise two.
  std::vector<std::pair<EvidenceAssessment, EvidenceAssessment>> witnesses;

  friend bool operator==(const PremiseFinding&, const PremiseFinding&) = default;
};

struct AuditVerdict {
  PremiseFinding premise1;
  PremiseFinding premise2;
  bool conclusion_true = false;
  std::pair<EvidenceAssessment, EvidenceAssessment> conclusion_witness;
  Verdict verdict = Verdict::no_violation;
  SemanticsAssignment semantics;
  double weight_first = 0.5;

  friend bool operator==(const AuditVerdict&, const AuditVerdict&) = default;
};

namespace detail {

inline Verdict classify(bool premise1, bool premise2, bool conclusion) {
  if (conclusion) return Verdict::no_violation;
  if (!premise1) return Verdict::blocked_at_premise_1;
  if (!premise2) return Verdict::blocked_at_premise_2;
  return Verdict::invalid;
}

}  // namespace detail

/// Evaluates the two-premise argument on an SLP pair under an explicit
/// choice of sampling-distribution semantics for each premise.
///
///   premise one:  Infr_{E-B}(x'*) equiv Infr_{E-B}(x''*)
///   premise two:  Infr_{E-B}(x^j*) equiv Infr_{E^j}(x^j*), for j = 1 and 2
///   conclusion:   Infr_{E'}(x'*) equiv Infr_{E''}(x''*)
///
/// Truth of each line is evidence_equivalent on the designated
/// assessments; premise two is read conjunctively over j. The verdict is
/// a pure function of the three truth values, and the evaluation order
/// cannot change any of them.
inline AuditVerdict audit(const SlpPair& pair, const HypothesisSpec& hyp,
                          const SemanticsAssignment& semantics, double weight_first = 0.5) {
  const BirnbaumExperiment eb = birnbaumize(pair, weight_first);

  const auto premise_one = [&]() {
    PremiseFinding finding;
    EvidenceAssessment left, right;
    if (semantics.premise1 == PremiseSemantics::unconditional) {
      left = infr_unconditional(eb, tb_statistic(eb, 1, pair.first.outcome), hyp);
      right = infr_unconditional(eb, tb_statistic(eb, 2, pair.second.outcome), hyp);
    } else {
      left = infr_conditional(eb, 1, pair.first.outcome, hyp);
      right = infr_conditional(eb, 2, pair.second.outcome, hyp);
    }
    finding.holds = evidence_equivalent(left, right);
    finding.witnesses.emplace_back(std::move(left), std::move(right));
    return finding;
  };

  const auto premise_two = [&]() {
    PremiseFinding finding;
    finding.holds = true;
    for (int j : {1, 2}) {
      const ExperimentOutcome& member = (j == 1) ? pair.first : pair.second;
      EvidenceAssessment left =
          (semantics.premise2 == PremiseSemantics::unconditional)
              ? infr_unconditional(eb, tb_statistic(eb, j, member.outcome), hyp)
              : infr_conditional(eb, j, member.outcome, hyp);
      EvidenceAssessment right = p_value(member.model, member.outcome, hyp);
      finding.holds = finding.holds && evidence_equivalent(left, right);
      finding.witnesses.emplace_back(std::move(left), std::move(right));
    }
    return finding;
  };

  AuditVerdict verdict;
  verdict.semantics = semantics;
  verdict.weight_first = weight_first;
  if (semantics.evaluation_order == EvaluationOrder::premise1_first) {
    verdict.premise1 = premise_one();
    verdict.premise2 = premise_two();
  } else {
    verdict.premise2 = premise_two();
    verdict.premise1 = premise_one();
  }

  EvidenceAssessment lhs = p_value(pair.first.model, pair.first.outcome, hyp);
  EvidenceAssessment rhs = p_value(pair.second.model, pair.second.outcome, hyp);
  verdict.conclusion_true = evidence_equivalent(lhs, rhs);
  verdict.conclusion_witness = {std::move(lhs), std::move(rhs)};

  verdict.verdict =
      detail::classify(verdict.premise1.holds, verdict.premise2.holds, verdict.conclusion_true);
  return verdict;
}

}  // namespace slplab
