// Command-line front end: runs the demonstrations and the audit engine,
// emitting text, JSON, or CSV reports.
//
// Exit codes: 0 success, 2 invalid input or usage, 3 internal invariant
// failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "slplab/slplab.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitInternal = 3;

struct CliState {
  std::string format = "text";
  std::string out_path;
  std::string demo;
  std::map<std::string, std::string> options;
};

// Registers a demo option that is forwarded to run_demo only when the
// user actually set it, so run_demo's own defaults stay authoritative.
void forward_option(CLI::App* cmd, CliState& state, const std::string& flag,
                    const std::string& key, const std::string& help) {
  cmd->add_option_function<std::string>(
      flag, [&state, key](const std::string& value) { state.options[key] = value; }, help);
}

int emit(const CliState& state) {
  const slplab::Report report = slplab::run_demo(state.demo, state.options);
  const std::string payload = slplab::serialize(report, slplab::parse_format(state.format));
  if (state.out_path.empty()) {
    std::cout << payload;
    return kExitOk;
  }
  std::ofstream out(state.out_path, std::ios::binary);
  if (!out) throw slplab::invalid_input("cannot open output file: " + state.out_path);
  out << payload;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CliState state;
  CLI::App app{"sampling-theory evidence demos and the Birnbaum argument audit"};
  app.require_subcommand(1);
  app.add_option("--format", state.format, "output format: text, json, or csv")
      ->check(CLI::IsMember({"text", "json", "csv"}));
  app.add_option("--out", state.out_path, "write the report to this file instead of stdout");

  // SLPLAB_SEED overrides the built-in default seed; --seed beats both.
  if (const char* env_seed = std::getenv("SLPLAB_SEED")) {
    state.options["seed"] = env_seed;
  }

  auto* example1 = app.add_subcommand(
      "example1", "binomial (n=20) vs negative binomial (r=6): exact p-values of an SLP pair");
  forward_option(example1, state, "--theta0", "theta0", "null value of theta (default 0.5)");
  forward_option(example1, state, "--direction", "direction", "test direction: less|greater");
  forward_option(example1, state, "--n", "n", "binomial trial count (default 20)");
  forward_option(example1, state, "--r", "r", "success count / negative-binomial target (default 6)");

  auto* example2 = app.add_subcommand(
      "example2", "fixed-n testing vs optional stopping at the 1.96 boundary (Monte Carlo)");
  forward_option(example2, state, "--sigma", "sigma", "known sigma (default 1)");
  forward_option(example2, state, "--n-max", "n_max", "stopping-rule truncation (default 169)");
  forward_option(example2, state, "--reps", "reps", "Monte Carlo replications (default 10000)");
  forward_option(example2, state, "--seed", "seed", "RNG seed (default 42, env SLPLAB_SEED)");
  forward_option(example2, state, "--mu0", "mu0", "null mean (default 0)");

  auto* example3 = app.add_subcommand(
      "example3", "two instruments of different precision: conditional vs unconditional p-value");
  forward_option(example3, state, "--xbar", "xbar", "observed measurement (default 3.9)");
  forward_option(example3, state, "--j", "j", "which instrument produced it, 1|2 (default 2)");
  forward_option(example3, state, "--mu0", "mu0", "null mean (default 0)");
  forward_option(example3, state, "--weight", "weight", "randomizer weight on instrument 1");
  forward_option(example3, state, "--direction", "direction", "test direction: less|greater");
  forward_option(example3, state, "--sigma-first", "sigma_first", "sigma of instrument 1 (default 0.01)");
  forward_option(example3, state, "--sigma-second", "sigma_second", "sigma of instrument 2 (default 100)");

  auto* example4 = app.add_subcommand(
      "example4", "Birnbaumization of an observed stop: the index-erasing statistic at work");
  forward_option(example4, state, "--sigma", "sigma", "known sigma (default 1)");
  forward_option(example4, state, "--stop-n", "stop_n", "observed stopping time (default 169)");
  forward_option(example4, state, "--weight", "weight", "mixture weight on the fixed-n member");
  forward_option(example4, state, "--mu0", "mu0", "null mean (default 0)");

  auto* audit_cmd = app.add_subcommand(
      "audit", "evaluate the two-premise argument on an SLP pair under chosen semantics");
  forward_option(audit_cmd, state, "--theta0", "theta0", "null value of theta (default 0.5)");
  forward_option(audit_cmd, state, "--direction", "direction", "test direction: less|greater");
  forward_option(audit_cmd, state, "--n", "n", "binomial trial count (default 20)");
  forward_option(audit_cmd, state, "--r", "r", "success count (default 6)");
  forward_option(audit_cmd, state, "--weight", "weight", "mixture weight (default 0.5)");
  forward_option(audit_cmd, state, "--semantics", "semantics",
                 "one assignment '<premise1>,<premise2>' (default: all three)");
  forward_option(audit_cmd, state, "--order", "order", "evaluation order: p1-first|p2-first");

  auto* factorize = app.add_subcommand(
      "factorize", "exhaustive sufficiency-factorization check in exact rational arithmetic");
  forward_option(factorize, state, "--model", "model", "binomial|negbinomial (default binomial)");
  forward_option(factorize, state, "--n", "n", "binomial trial count (default 12)");
  forward_option(factorize, state, "--r", "r", "negative-binomial target successes (default 6)");
  forward_option(factorize, state, "--max-n", "max_n", "largest N slice for negbinomial (default 20)");
  forward_option(factorize, state, "--params", "params",
                 "comma-separated exact thetas, e.g. '0.1,1/2,0.9' (default 0.1,0.5,0.9)");

  auto* simulate = app.add_subcommand(
      "simulate-stopping", "null stopping-time distribution of the 1.96 boundary rule");
  forward_option(simulate, state, "--sigma", "sigma", "known sigma (default 1)");
  forward_option(simulate, state, "--n-max", "n_max", "stopping-rule truncation (default 169)");
  forward_option(simulate, state, "--reps", "reps", "Monte Carlo replications (default 10000)");
  forward_option(simulate, state, "--seed", "seed", "RNG seed (default 42, env SLPLAB_SEED)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  state.demo = app.get_subcommands().front()->get_name();
  try {
    return emit(state);
  } catch (const slplab::internal_error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const slplab::invalid_input& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}
