// Acceptance suite: one line per criterion, nonzero exit on any failure.
//
//   1  exact Example-1 p-values, reproduced by whole-space enumeration
//   2  sufficiency factorization, exhaustive and exact
//   3  mixture conditional vs unconditional assessments
//   4  the audit verdict table and its property over random pairs
//   5  index-erasing statistic collapse, exhaustive at n = 12
//   6  optional stopping Monte Carlo against the nominal level
//   7  report plumbing: round trips, determinism, exit codes

#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "oracles.hpp"
#include "slplab/slplab.hpp"

using namespace slplab;

namespace {

int g_failed_criteria = 0;

struct Checker {
  std::vector<std::string> problems;
  void expect(bool condition, const std::string& what) {
    if (!condition) problems.push_back(what);
  }
};

void run_criterion(int number, const std::string& label, double budget_seconds,
                   const std::function<void(Checker&)>& body) {
  Checker checker;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(checker);
  } catch (const std::exception& e) {
    checker.problems.push_back(std::string("unexpected exception: ") + e.what());
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (budget_seconds > 0 && seconds > budget_seconds) {
    checker.problems.push_back("runtime " + compact_double(seconds) + "s exceeds " +
                               compact_double(budget_seconds) + "s budget");
  }
  const bool pass = checker.problems.empty();
  if (!pass) ++g_failed_criteria;
  std::printf("[%s] criterion %d: %s (%.2fs)\n", pass ? "PASS" : "FAIL", number, label.c_str(),
              seconds);
  for (const auto& problem : checker.problems) std::printf("        - %s\n", problem.c_str());
  std::fflush(stdout);
}

struct RunResult {
  int exit_code = -1;
  std::string stdout_text;
};

RunResult run_cli(const std::string& args) {
  const std::string command = std::string("\"") + SLPLAB_CLI_BIN + "\" " + args + " 2>/dev/null";
  RunResult result;
  FILE* pipe = popen(command.c_str(), "r");
  if (pipe == nullptr) return result;
  std::array<char, 4096> buffer{};
  std::size_t got = 0;
  while ((got = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) {
    result.stdout_text.append(buffer.data(), got);
  }
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

SlpPair classic_pair(int trials, int successes) {
  const ExperimentOutcome a{ExperimentModel::binomial(trials),
                            Outcome::summary(successes, trials)};
  const ExperimentOutcome b{ExperimentModel::neg_binomial(successes),
                            Outcome::summary(successes, trials)};
  auto pair = check_slp_pair(a, b, {0.25, 0.5, 0.75});
  ensure(pair.has_value(), "classic pair must certify");
  return *pair;
}

void criterion_1(Checker& c) {
  const HypothesisSpec hyp{0.5, Direction::less};
  const auto binomial = ExperimentModel::binomial(20);
  const auto neg_binomial = ExperimentModel::neg_binomial(6);
  const auto obs = Outcome::summary(6, 20);

  const Rational p_bin = p_value(binomial, obs, hyp).p_value.rational();
  const Rational p_neg = p_value(neg_binomial, obs, hyp).p_value.rational();
  c.expect(p_bin == Rational(60460, Integer(1) << 20), "p_binomial != 60460/2^20");
  c.expect(p_neg == Rational(16664, Integer(1) << 19), "p_negbinomial != 16664/2^19");

  // brute force over all 2^20 / all 6th-success-at-n sequences
  c.expect(p_bin == oracle::binomial_low_tail_bruteforce(20, 6, Rational(1, 2)),
           "2^20 enumeration disagrees with the binomial tail");
  c.expect(p_neg == oracle::neg_binomial_upper_tail_bruteforce(6, 20, Rational(1, 2)),
           "first-passage enumeration disagrees with the negative-binomial tail");
  c.expect(p_bin != p_neg, "the two assessments must differ (SLP violation)");

  const auto pair = classic_pair(20, 6);
  c.expect(pair.constant.rational() == Rational(10, 3), "pair constant != 10/3");
  for (int i = 1; i <= 11; ++i) {
    const Rational theta(i, 12);
    const Rational ratio =
        pmf(binomial, obs, theta).rational() / pmf(neg_binomial, obs, theta).rational();
    c.expect(ratio == Rational(10, 3),
             "likelihood ratio at grid point " + rational_to_string(theta) + " != 10/3");
  }
}

void criterion_2(Checker& c) {
  const std::vector<Rational> params{Rational(1, 10), Rational(1, 2), Rational(9, 10)};

  for (int n = 1; n <= 12; ++n) {
    const auto report = verify_factorization(ExperimentModel::binomial(n), params);
    c.expect(report.pass, "Binomial{" + std::to_string(n) + "} factorization failed");
    for (int r = 0; r <= n; ++r) {
      const auto& slice = report.slices[static_cast<std::size_t>(r)];
      c.expect(slice.conditional == Rational(1) / Rational(oracle::choose(n, r)),
               "Binomial{" + std::to_string(n) + "} slice R=" + std::to_string(r) +
                   " conditional != 1/C(n,r)");
      c.expect(Integer(slice.sequence_count) == oracle::choose(n, r),
               "slice sequence count disagrees with Pascal's triangle");
    }
  }

  // independent route at n = 12: conditional probabilities from the public
  // pmf over every one of the 2^12 sequences
  {
    const auto model = ExperimentModel::binomial(12);
    for (const auto& theta : params) {
      std::vector<Rational> marginal(13, 0);
      std::vector<std::vector<Rational>> sequence_probs(13);
      for (std::uint32_t bits = 0; bits < (1u << 12); ++bits) {
        std::vector<int> seq(12);
        for (int i = 0; i < 12; ++i) seq[static_cast<std::size_t>(i)] = (bits >> i) & 1u;
        const int r = std::popcount(bits);
        const Rational prob = pmf(model, Outcome::sequence(seq), theta).rational();
        marginal[static_cast<std::size_t>(r)] += prob;
        sequence_probs[static_cast<std::size_t>(r)].push_back(prob);
      }
      for (int r = 0; r <= 12; ++r) {
        const Rational expected = Rational(1) / Rational(oracle::choose(12, r));
        for (const auto& prob : sequence_probs[static_cast<std::size_t>(r)]) {
          c.expect(prob / marginal[static_cast<std::size_t>(r)] == expected,
                   "pmf-route conditional not uniform at theta=" + rational_to_string(theta));
        }
      }
    }
  }

  FactorizationOptions options;
  options.neg_binomial_max_trials = 20;
  const auto neg = verify_factorization(ExperimentModel::neg_binomial(6), params, options);
  c.expect(neg.pass, "NegBinomial{6} factorization failed");
  const auto& last = neg.slices.back();
  c.expect(last.statistic == "N=20" && last.sequence_count == 11628 &&
               last.conditional == Rational(1, 11628),
           "NegBinomial{6} slice N=20 must be uniform 1/11628 over 11628 sequences");
}

void criterion_3(Checker& c) {
  const HypothesisSpec greater{0.0, Direction::greater};
  const auto instruments = ExperimentModel::mixture(
      0.5, ExperimentModel::normal_fixed_n(1, 0.01), ExperimentModel::normal_fixed_n(1, 100.0));
  const auto measurement = Outcome::normal_summary(3.9, 1);

  for (int j : {1, 2}) {
    const auto conditional =
        mixture_conditional(instruments, Outcome::mixture(j, measurement), greater);
    const auto standalone = p_value(mixture_component(instruments, j), measurement, greater);
    const double gap = std::fabs(conditional.p_value.value() - standalone.p_value.value());
    c.expect(gap <= 1e-15 * std::max(1.0, std::fabs(standalone.p_value.value())),
             "instruments: conditional != standalone component p-value at j=" + std::to_string(j));
  }
  const Real pf = p_value(mixture_component(instruments, 1), measurement, greater).p_value;
  const Real ps = p_value(mixture_component(instruments, 2), measurement, greater).p_value;
  const auto unconditional = mixture_unconditional(pf, ps, 0.5);
  c.expect(unconditional.p_value.value() == 0.5 * pf.value() + 0.5 * ps.value(),
           "instruments: unconditional != convex combination");
  const auto cond2 = mixture_conditional(instruments, Outcome::mixture(2, measurement), greater);
  c.expect(!evidence_equivalent(cond2, unconditional),
           "instruments: conditional and unconditional must differ when p' != p''");

  const HypothesisSpec less{0.5, Direction::less};
  const auto classic = ExperimentModel::mixture(0.5, ExperimentModel::binomial(20),
                                                ExperimentModel::neg_binomial(6));
  const auto inner = Outcome::summary(6, 20);
  for (int j : {1, 2}) {
    const auto conditional = mixture_conditional(classic, Outcome::mixture(j, inner), less);
    const auto standalone = p_value(mixture_component(classic, j), inner, less);
    c.expect(conditional.p_value.rational() == standalone.p_value.rational(),
             "classic mixture: conditional must equal the standalone assessment exactly");
  }
  const Real p1 = p_value(mixture_component(classic, 1), inner, less).p_value;
  const Real p2 = p_value(mixture_component(classic, 2), inner, less).p_value;
  const auto mixed = mixture_unconditional(p1, p2, 0.5);
  c.expect(mixed.p_value.rational() ==
               (p1.rational() + p2.rational()) / 2,
           "classic mixture: unconditional != exact convex combination");
  c.expect(mixed.p_value.rational() != p1.rational() &&
               mixed.p_value.rational() != p2.rational(),
           "classic mixture: unconditional must differ from both components");
}

void criterion_4(Checker& c) {
  const HypothesisSpec hyp{0.5, Direction::less};
  const auto pair = classic_pair(20, 6);

  const auto invalid =
      audit(pair, hyp, {PremiseSemantics::unconditional, PremiseSemantics::conditional});
  c.expect(invalid.premise1.holds && invalid.premise2.holds && !invalid.conclusion_true &&
               invalid.verdict == Verdict::invalid,
           "(uncond, cond) must be: premises true, conclusion false, invalid");

  const auto blocked2 =
      audit(pair, hyp, {PremiseSemantics::unconditional, PremiseSemantics::unconditional});
  c.expect(blocked2.verdict == Verdict::blocked_at_premise_2,
           "(uncond, uncond) must block at premise two");
  const auto& witness = blocked2.premise2.witnesses.front();
  const Rational gap =
      witness.second.p_value.rational() - witness.first.p_value.rational();
  c.expect(gap == Rational(6783, Integer(1) << 19),
           "premise-two witness must be |0.04472 - 0.05766| = 6783/2^19");

  const auto blocked1 =
      audit(pair, hyp, {PremiseSemantics::conditional, PremiseSemantics::conditional});
  c.expect(blocked1.verdict == Verdict::blocked_at_premise_1,
           "(cond, cond) must block at premise one");

  for (auto p1 : {PremiseSemantics::unconditional, PremiseSemantics::conditional}) {
    for (auto p2 : {PremiseSemantics::unconditional, PremiseSemantics::conditional}) {
      AuditVerdict forward = audit(pair, hyp, {p1, p2, EvaluationOrder::premise1_first});
      AuditVerdict reversed = audit(pair, hyp, {p1, p2, EvaluationOrder::premise2_first});
      reversed.semantics.evaluation_order = EvaluationOrder::premise1_first;
      c.expect(forward == reversed, "evaluation order changed an audit field");
    }
  }

  SplitMix64 gen(8675309);
  int violating_pairs = 0;
  while (violating_pairs < 100) {
    const int n = 2 + static_cast<int>(gen.next_u64() % 18);
    const int r = 1 + static_cast<int>(gen.next_u64() % static_cast<unsigned>(n));
    const HypothesisSpec random_hyp{0.05 + 0.9 * gen.next_double(),
                                    (gen.next_u64() & 1u) ? Direction::less : Direction::greater};
    const auto random_pair = classic_pair(n, r);
    const auto pa = p_value(random_pair.first.model, random_pair.first.outcome, random_hyp);
    const auto pb = p_value(random_pair.second.model, random_pair.second.outcome, random_hyp);
    if (evidence_equivalent(pa, pb)) continue;
    ++violating_pairs;
    for (auto p1 : {PremiseSemantics::unconditional, PremiseSemantics::conditional}) {
      for (auto p2 : {PremiseSemantics::unconditional, PremiseSemantics::conditional}) {
        const auto verdict = audit(random_pair, random_hyp, {p1, p2});
        c.expect(!(verdict.premise1.holds && verdict.premise2.holds && verdict.conclusion_true),
                 "an assignment yielded premises-true and conclusion-true on a violating pair");
        if (p1 == PremiseSemantics::unconditional && p2 == PremiseSemantics::conditional) {
          c.expect(verdict.verdict == Verdict::invalid,
                   "(uncond, cond) must exhibit true premises with a false conclusion");
        }
      }
    }
  }
}

void criterion_5(Checker& c) {
  for (int target = 1; target <= 12; ++target) {
    const auto eb = birnbaumize(classic_pair(12, target), 0.5);

    // full summary-level sample space of the binomial member
    for (int r = 0; r <= 12; ++r) {
      const bool collapsed = tb_statistic(eb, 1, Outcome::summary(r, 12)).is_collapsed();
      c.expect(collapsed == (r == target), "j=1 collapse set wrong at r=" + std::to_string(r));
      if (r != target) {
        const auto tb = tb_statistic(eb, 1, Outcome::summary(r, 12));
        c.expect(tb.component() == 1, "index not preserved on the else branch");
      }
    }

    // full sequence-level sample space: 2^12 bit strings
    for (std::uint32_t bits = 0; bits < (1u << 12); ++bits) {
      std::vector<int> seq(12);
      for (int i = 0; i < 12; ++i) seq[static_cast<std::size_t>(i)] = (bits >> i) & 1u;
      const bool collapsed = tb_statistic(eb, 1, Outcome::sequence(seq)).is_collapsed();
      if (collapsed != (std::popcount(bits) == target)) {
        c.expect(false, "sequence-level collapse set wrong at target " + std::to_string(target));
        break;
      }
    }

    // negative-binomial member: stopping times up to 36
    for (int n = target; n <= 36; ++n) {
      const bool collapsed = tb_statistic(eb, 2, Outcome::summary(target, n)).is_collapsed();
      c.expect(collapsed == (n == 12), "j=2 collapse set wrong at n=" + std::to_string(n));
    }
  }
}

void criterion_6(Checker& c) {
  const std::uint64_t seed = kDefaultSeed;

  const auto single = stop_fraction(1.0, 1, 10000, seed);
  const double nominal = oracle::norm_upper_tail(1.96);
  const double se1 = std::sqrt(nominal * (1.0 - nominal) / 10000.0);
  c.expect(std::fabs(single.final_fraction() - nominal) <= 4.0 * se1,
           "n_max=1 stop fraction not within 4 SE of 0.0250");

  const auto bounded = stop_fraction(1.0, 169, 10000, seed);
  c.expect(bounded.final_fraction() > 0.025 + 5.0 * bounded.standard_error,
           "n_max=169 stop fraction must exceed 0.025 + 5 SE");
  // pinned Monte Carlo oracle for this generator and seed
  c.expect(std::fabs(bounded.final_fraction() - 0.2175) <= 1e-12,
           "pinned stop fraction at n_max=169, seed 42 drifted from 0.2175");

  const auto longer = stop_fraction(1.0, 1000, 10000, seed);
  bool nested = true;
  for (int n = 1; n <= 169; ++n) {
    nested = nested && bounded.cumulative_stops[static_cast<std::size_t>(n) - 1] ==
                           longer.cumulative_stops[static_cast<std::size_t>(n) - 1];
  }
  c.expect(nested, "shared-path prefix counts differ between n_max=169 and n_max=1000");
  bool monotone = true;
  for (int n = 2; n <= 1000; ++n) {
    monotone = monotone && longer.stop_fraction_at(n) >= longer.stop_fraction_at(n - 1);
  }
  c.expect(monotone, "cumulative stop fractions must be nondecreasing");
  c.expect(longer.final_fraction() >= bounded.final_fraction(),
           "stop fraction must be nondecreasing in n_max on shared paths");

  for (int stop_n = 1; stop_n <= 200; ++stop_n) {
    const auto pair = slp_partner_for_stop(stop_n, 1.0);
    const auto boundary =
        p_value(pair.first.model, pair.first.outcome, HypothesisSpec{0.0, Direction::greater});
    if (std::fabs(boundary.p_value.value() - 0.025) >= 1e-4) {
      c.expect(false, "fixed-n partner boundary p-value must be 0.0250 +- 1e-4 at stop_n=" +
                          std::to_string(stop_n));
      break;
    }
  }
}

void criterion_7(Checker& c) {
  const std::vector<std::pair<std::string, std::map<std::string, std::string>>> demos{
      {"example1", {}},
      {"example3", {}},
      {"audit", {}},
      {"factorize", {{"n", "6"}}},
      {"simulate-stopping", {{"reps", "300"}, {"n_max", "30"}, {"seed", "5"}}},
  };
  for (const auto& [name, options] : demos) {
    const Report report = run_demo(name, options);
    const std::string json = serialize(report, ReportFormat::json);
    const Report reparsed = parse_report_json(json);
    c.expect(reparsed == report, "JSON round trip not the identity for demo " + name);
    c.expect(serialize(reparsed, ReportFormat::json) == json,
             "re-serialization not byte-identical for demo " + name);
  }

  const std::string args = "--format json simulate-stopping --reps 300 --n-max 30 --seed 11";
  const auto first = run_cli(args);
  const auto second = run_cli(args);
  c.expect(first.exit_code == 0, "cli success must exit 0");
  c.expect(first.stdout_text == second.stdout_text && !first.stdout_text.empty(),
           "identical seeded invocations must emit byte-identical JSON");

  c.expect(run_cli("--format json example1").exit_code == 0, "cli success must exit 0");
  c.expect(run_cli("no-such-demo").exit_code == 2, "unknown demo must exit 2");
  c.expect(run_cli("example1 --theta0 not-a-number").exit_code == 2,
           "malformed option value must exit 2");
}

}  // namespace

int main() {
  run_criterion(1, "Example-1 SLP violation, exact and enumerated", 10.0, criterion_1);
  run_criterion(2, "sufficiency factorization, exhaustive and exact", 30.0, criterion_2);
  run_criterion(3, "mixture conditional vs unconditional assessments", 0.0, criterion_3);
  run_criterion(4, "audit verdict table and unsoundness property", 0.0, criterion_4);
  run_criterion(5, "index-erasing collapse, exhaustive at n=12", 0.0, criterion_5);
  run_criterion(6, "optional stopping exceeds the nominal level", 60.0, criterion_6);
  run_criterion(7, "report round trips, determinism, exit codes", 0.0, criterion_7);

  if (g_failed_criteria != 0) {
    std::printf("%d criterion(s) failed\n", g_failed_criteria);
    return 1;
  }
  std::printf("all acceptance criteria passed\n");
  return 0;
}
