#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "slplab/birnbaum.hpp"
#include "slplab/rng.hpp"
#include "slplab/stopping.hpp"

using namespace slplab;

namespace {

const HypothesisSpec kThetaHalfLess{0.5, Direction::less};

SlpPair classic_pair(int trials = 20, int successes = 6) {
  const ExperimentOutcome a{ExperimentModel::binomial(trials),
                            Outcome::summary(successes, trials)};
  const ExperimentOutcome b{ExperimentModel::neg_binomial(successes),
                            Outcome::summary(successes, trials)};
  return *check_slp_pair(a, b, {0.25, 0.5, 0.75});
}

}  // namespace

TEST_CASE("birnbaumize produces the weighted enlarged experiment", "[birnbaum]") {
  const auto pair = classic_pair();
  const auto eb = birnbaumize(pair, 0.5);
  CHECK(eb.weight_first == 0.5);

  // member likelihoods within E-B are 0.5 * C(20,6) theta^6 (1-theta)^14
  // and 0.5 * C(19,5) theta^6 (1-theta)^14
  const auto model = ExperimentModel::birnbaumized(pair, 0.5);
  const auto obs1 = Outcome::mixture(1, pair.first.outcome);
  const auto obs2 = Outcome::mixture(2, pair.second.outcome);
  CHECK(pmf(model, obs1, Rational(1, 2)).rational() == Rational(38760, 1048576) / 2);
  CHECK(pmf(model, obs2, Rational(1, 2)).rational() == Rational(11628, 1048576) / 2);
  const auto k1 = likelihood_kernel(model, obs1);
  const auto k2 = likelihood_kernel(model, obs2);
  CHECK(k1.proportional_to(k2));
  CHECK(k1.bernoulli().constant == Rational(38760) / 2);
  CHECK(k2.bernoulli().constant == Rational(11628) / 2);

  // degenerate pair of an experiment with itself
  const ExperimentOutcome self{ExperimentModel::binomial(20), Outcome::summary(6, 20)};
  const auto identity = *check_slp_pair(self, self, {0.5});
  CHECK(identity.constant.rational() == 1);
  CHECK_NOTHROW(birnbaumize(identity, 0.5));

  // the fixed-n / optional-stopping pair birnbaumizes too
  CHECK_NOTHROW(birnbaumize(slp_partner_for_stop(169, 1.0), 0.5));

  CHECK_THROWS_AS(birnbaumize(pair, 0.0), invalid_input);
  SlpPair broken = pair;
  broken.second.outcome = Outcome::summary(6, 25);
  CHECK_THROWS_AS(birnbaumize(broken, 0.5), invalid_input);
}

TEST_CASE("tb_statistic collapses exactly the designated members", "[birnbaum]") {
  const auto eb = birnbaumize(classic_pair(), 0.5);

  CHECK(tb_statistic(eb, 2, Outcome::summary(6, 20)).is_collapsed());
  CHECK(tb_statistic(eb, 1, Outcome::summary(6, 20)).is_collapsed());

  const auto other = tb_statistic(eb, 1, Outcome::summary(3, 20));
  CHECK_FALSE(other.is_collapsed());
  CHECK(other.component() == 1);
  CHECK(other.outcome() == Outcome::summary(3, 20));

  // a 20-trial sequence with six successes is the member, once reduced
  std::vector<int> bits(20, 0);
  for (int i : {1, 4, 6, 9, 13, 17}) bits[static_cast<std::size_t>(i)] = 1;
  CHECK(tb_statistic(eb, 1, Outcome::sequence(bits)).is_collapsed());

  // j = 2 must fit the negative-binomial component
  CHECK_FALSE(tb_statistic(eb, 2, Outcome::summary(6, 25)).is_collapsed());
  CHECK_THROWS_AS(tb_statistic(eb, 2, Outcome::summary(4, 25)), invalid_input);
  CHECK_THROWS_AS(tb_statistic(eb, 3, Outcome::summary(6, 20)), invalid_input);
}

TEST_CASE("tb_statistic over small exhaustive sample spaces", "[birnbaum]") {
  for (int target = 1; target <= 8; ++target) {
    const auto eb = birnbaumize(classic_pair(8, target), 0.5);
    for (int r = 0; r <= 8; ++r) {
      CHECK(tb_statistic(eb, 1, Outcome::summary(r, 8)).is_collapsed() == (r == target));
    }
    for (int n = target; n <= 20; ++n) {
      CHECK(tb_statistic(eb, 2, Outcome::summary(target, n)).is_collapsed() == (n == 8));
    }
  }
}

TEST_CASE("infr_unconditional averages the pair and passes others through", "[birnbaum]") {
  const auto eb = birnbaumize(classic_pair(), 0.5);

  const auto collapsed =
      infr_unconditional(eb, tb_statistic(eb, 2, Outcome::summary(6, 20)), kThetaHalfLess);
  CHECK(collapsed.p_value.rational() == Rational(23447, 524288));
  CHECK(collapsed.p_value.value() == Catch::Approx(0.04472).margin(5e-6));
  CHECK(collapsed.distribution_used == SamplingDistribution::birnbaum_unconditional);
  CHECK_FALSE(collapsed.index_preserved);

  // invariant to which member was observed
  const auto from_first =
      infr_unconditional(eb, tb_statistic(eb, 1, Outcome::summary(6, 20)), kThetaHalfLess);
  CHECK(from_first.p_value.rational() == collapsed.p_value.rational());

  const auto plain =
      infr_unconditional(eb, tb_statistic(eb, 1, Outcome::summary(3, 20)), kThetaHalfLess);
  CHECK(plain.index_preserved);
  CHECK(plain.p_value.rational() == Rational(1351, 1048576));  // frozen exact tail sum at r=3
  CHECK(plain.p_value.rational() == oracle::binomial_low_tail_bruteforce(20, 3, Rational(1, 2)));

  // equal components average to themselves
  const ExperimentOutcome self{ExperimentModel::binomial(20), Outcome::summary(6, 20)};
  const auto identity = birnbaumize(*check_slp_pair(self, self, {0.5}), 0.5);
  const auto averaged =
      infr_unconditional(identity, tb_statistic(identity, 1, Outcome::summary(6, 20)),
                         kThetaHalfLess);
  CHECK(averaged.p_value.rational() == Rational(60460, 1048576));
}

TEST_CASE("infr_conditional is the component assessment", "[birnbaum]") {
  const auto eb = birnbaumize(classic_pair(), 0.5);
  const auto first = infr_conditional(eb, 1, Outcome::summary(6, 20), kThetaHalfLess);
  const auto second = infr_conditional(eb, 2, Outcome::summary(6, 20), kThetaHalfLess);
  CHECK(first.p_value.rational() == Rational(60460, 1048576));
  CHECK(second.p_value.rational() == Rational(16664, 524288));
  CHECK(first.distribution_used == SamplingDistribution::component_conditional);

  const auto standalone =
      p_value(ExperimentModel::binomial(20), Outcome::summary(2, 20), kThetaHalfLess);
  CHECK(infr_conditional(eb, 1, Outcome::summary(2, 20), kThetaHalfLess).p_value.rational() ==
        standalone.p_value.rational());
}

TEST_CASE("the audit reproduces the semantics verdict table", "[birnbaum]") {
  const auto pair = classic_pair();

  const auto invalid = audit(pair, kThetaHalfLess,
                             {PremiseSemantics::unconditional, PremiseSemantics::conditional});
  CHECK(invalid.premise1.holds);
  CHECK(invalid.premise2.holds);
  CHECK_FALSE(invalid.conclusion_true);
  CHECK(invalid.verdict == Verdict::invalid);
  CHECK(invalid.premise1.witnesses.front().first.p_value.rational() == Rational(23447, 524288));
  CHECK(invalid.conclusion_witness.first.p_value.rational() == Rational(60460, 1048576));
  CHECK(invalid.conclusion_witness.second.p_value.rational() == Rational(16664, 524288));

  const auto blocked2 = audit(pair, kThetaHalfLess,
                              {PremiseSemantics::unconditional, PremiseSemantics::unconditional});
  CHECK(blocked2.premise1.holds);
  CHECK_FALSE(blocked2.premise2.holds);
  CHECK(blocked2.verdict == Verdict::blocked_at_premise_2);
  // witness at j=1: |0.04472 - 0.05766|, exactly 6783/524288
  const auto& witness = blocked2.premise2.witnesses.front();
  CHECK(witness.first.p_value.rational() == Rational(23447, 524288));
  CHECK(witness.second.p_value.rational() == Rational(60460, 1048576));
  const Rational gap = witness.second.p_value.rational() - witness.first.p_value.rational();
  CHECK(gap == Rational(6783, 524288));

  const auto blocked1 = audit(pair, kThetaHalfLess,
                              {PremiseSemantics::conditional, PremiseSemantics::conditional});
  CHECK_FALSE(blocked1.premise1.holds);
  CHECK(blocked1.premise2.holds);
  CHECK(blocked1.verdict == Verdict::blocked_at_premise_1);
}

TEST_CASE("evaluation order never changes a verdict field", "[birnbaum]") {
  const auto pair = classic_pair();
  for (auto p1 : {PremiseSemantics::unconditional, PremiseSemantics::conditional}) {
    for (auto p2 : {PremiseSemantics::unconditional, PremiseSemantics::conditional}) {
      AuditVerdict forward = audit(pair, kThetaHalfLess, {p1, p2, EvaluationOrder::premise1_first});
      AuditVerdict reversed = audit(pair, kThetaHalfLess, {p1, p2, EvaluationOrder::premise2_first});
      // align the recorded order before the field-for-field comparison
      reversed.semantics.evaluation_order = EvaluationOrder::premise1_first;
      CHECK(forward == reversed);
    }
  }
}

TEST_CASE("degenerate pairs audit to no-violation", "[birnbaum]") {
  const ExperimentOutcome self{ExperimentModel::binomial(20), Outcome::summary(6, 20)};
  const auto identity = *check_slp_pair(self, self, {0.5});
  for (auto p1 : {PremiseSemantics::unconditional, PremiseSemantics::conditional}) {
    for (auto p2 : {PremiseSemantics::unconditional, PremiseSemantics::conditional}) {
      const auto verdict = audit(identity, kThetaHalfLess, {p1, p2});
      CHECK(verdict.conclusion_true);
      CHECK(verdict.verdict == Verdict::no_violation);
      CHECK(verdict.premise1.holds);
      CHECK(verdict.premise2.holds);
    }
  }
}

TEST_CASE("no semantics assignment rescues a violating pair", "[birnbaum]") {
  SplitMix64 gen(314159);
  int checked = 0;
  while (checked < 120) {
    const int n = 2 + static_cast<int>(gen.next_u64() % 18);
    const int r = 1 + static_cast<int>(gen.next_u64() % static_cast<unsigned>(n));
    const double theta0 = 0.05 + 0.9 * gen.next_double();
    const Direction direction = (gen.next_u64() & 1u) ? Direction::less : Direction::greater;
    const HypothesisSpec hyp{theta0, direction};
    const auto pair = classic_pair(n, r);

    const auto p1 = p_value(pair.first.model, pair.first.outcome, hyp);
    const auto p2 = p_value(pair.second.model, pair.second.outcome, hyp);
    if (evidence_equivalent(p1, p2)) continue;  // need an SLP violation
    ++checked;

    bool rescued = false;
    for (auto s1 : {PremiseSemantics::unconditional, PremiseSemantics::conditional}) {
      for (auto s2 : {PremiseSemantics::unconditional, PremiseSemantics::conditional}) {
        const auto verdict = audit(pair, hyp, {s1, s2});
        if (verdict.premise1.holds && verdict.premise2.holds && verdict.conclusion_true) {
          rescued = true;
        }
        if (s1 == PremiseSemantics::unconditional && s2 == PremiseSemantics::conditional) {
          CHECK(verdict.premise1.holds);
          CHECK(verdict.premise2.holds);
          CHECK_FALSE(verdict.conclusion_true);
          CHECK(verdict.verdict == Verdict::invalid);
        }
      }
    }
    CHECK_FALSE(rescued);
  }
}

TEST_CASE("premise one holds under unconditional semantics at any weight", "[birnbaum]") {
  const auto pair = classic_pair();
  Rational previous(-1);
  for (double weight : {0.1, 0.25, 0.5, 0.75, 0.9}) {
    const auto verdict = audit(pair, kThetaHalfLess,
                               {PremiseSemantics::unconditional, PremiseSemantics::conditional},
                               weight);
    CHECK(verdict.premise1.holds);
    const Rational w = rational_from_double(weight);
    const Rational expected =
        w * Rational(60460, 1048576) + (1 - w) * Rational(16664, 524288);
    CHECK(verdict.premise1.witnesses.front().first.p_value.rational() == expected);
    CHECK(verdict.premise1.witnesses.front().first.p_value.rational() != previous);
    previous = verdict.premise1.witnesses.front().first.p_value.rational();
  }
}
