#pragma once

#include <cstdint>
#include <optional>
#include <thread>
#include <vector>

#include "slplab/rng.hpp"
#include "slplab/slp.hpp"

namespace slplab {

/// The optional-stopping boundary: continue sampling until the running
/// mean exceeds kBoundaryZ * sigma / sqrt(n).
inline constexpr double kBoundaryZ = 1.96;

inline double stopping_boundary(double sigma, int n) {
  return kBoundaryZ * sigma / std::sqrt(static_cast<double>(n));
}

struct StoppingPathResult {
  bool stopped = false;
  std::optional<int> stop_n;   // absent when the path ran to max_trials
  double final_mean = 0.0;     // mean at the stop, or at max_trials
  double boundary_at_stop = 0.0;
};

/// Runs one path: draws x_i = mu + sigma * z_i from the injected noise
/// stream and stops at the first n <= max_trials whose running mean
/// strictly exceeds the boundary. Ties count as not stopped.
template <class Noise>
StoppingPathResult simulate_path(double mu, double sigma, int max_trials, Noise&& noise) {
  require(sigma > 0.0 && std::isfinite(sigma), "simulate_path: sigma must be positive");
  require(max_trials >= 1, "simulate_path: max_trials must be >= 1");
  double sum = 0.0;
  StoppingPathResult result;
  for (int n = 1; n <= max_trials; ++n) {
    sum += mu + sigma * noise();
    const double mean = sum / n;
    if (mean > stopping_boundary(sigma, n)) {
      result.stopped = true;
      result.stop_n = n;
      result.final_mean = mean;
      result.boundary_at_stop = stopping_boundary(sigma, n);
      return result;
    }
  }
  result.final_mean = sum / max_trials;
  result.boundary_at_stop = stopping_boundary(sigma, max_trials);
  return result;
}

struct StoppingStudy {
  int replications = 0;
  std::uint64_t seed = 0;
  int max_trials = 0;
  // cumulative_stops[n-1] = number of paths that had stopped by trial n;
  // nondecreasing by construction.
  std::vector<std::int64_t> cumulative_stops;
  double standard_error = 0.0;  // binomial SE of the final fraction

  double stop_fraction_at(int n) const {
    require(n >= 1 && n <= max_trials, "StoppingStudy: n out of range");
    return static_cast<double>(cumulative_stops[static_cast<std::size_t>(n) - 1]) / replications;
  }
  double final_fraction() const { return stop_fraction_at(max_trials); }

  friend bool operator==(const StoppingStudy&, const StoppingStudy&) = default;
};

/// Monte Carlo estimate of the null (mu = 0) stopping-time distribution:
/// `replications` independent paths on substreams indexed by replication
/// number. The aggregate is bit-identical for a fixed seed at any thread
/// count.
inline StoppingStudy stop_fraction(double sigma, int max_trials, int replications,
                                   std::uint64_t seed, unsigned threads = 0) {
  require(sigma > 0.0 && std::isfinite(sigma), "stop_fraction: sigma must be positive");
  require(max_trials >= 1, "stop_fraction: max_trials must be >= 1");
  require(replications >= 100, "stop_fraction: need at least 100 replications");

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, 64);

  std::vector<std::vector<std::int64_t>> stops_at(threads,
                                                  std::vector<std::int64_t>(max_trials, 0));
  const auto worker = [&](unsigned t) {
    auto& local = stops_at[t];
    for (int rep = static_cast<int>(t); rep < replications; rep += static_cast<int>(threads)) {
      GaussianStream noise(substream(seed, static_cast<std::uint64_t>(rep)));
      const auto path = simulate_path(0.0, sigma, max_trials, noise);
      if (path.stopped) ++local[static_cast<std::size_t>(*path.stop_n) - 1];
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, t);
  for (auto& th : pool) th.join();

  StoppingStudy study;
  study.replications = replications;
  study.seed = seed;
  study.max_trials = max_trials;
  study.cumulative_stops.assign(max_trials, 0);
  std::int64_t running = 0;
  for (int n = 1; n <= max_trials; ++n) {
    for (unsigned t = 0; t < threads; ++t) running += stops_at[t][static_cast<std::size_t>(n) - 1];
    study.cumulative_stops[static_cast<std::size_t>(n) - 1] = running;
  }
  const double p = study.final_fraction();
  study.standard_error = std::sqrt(p * (1.0 - p) / replications);
  return study;
}

/// The fixed-n SLP partner of an observed stop at `stop_n`: the same
/// boundary value of the sample mean under a fixed-sample experiment.
/// The two likelihood kernels in mu coincide, which the returned pair's
/// constant certifies on the grid mu in {-1, 0, 1}.
inline SlpPair slp_partner_for_stop(int stop_n, double sigma) {
  require(stop_n >= 1, "slp_partner_for_stop: stop_n must be >= 1");
  require(sigma > 0.0 && std::isfinite(sigma), "slp_partner_for_stop: sigma must be positive");
  const Outcome boundary = Outcome::normal_summary(stopping_boundary(sigma, stop_n), stop_n);
  const ExperimentOutcome fixed{ExperimentModel::normal_fixed_n(stop_n, sigma), boundary};
  const ExperimentOutcome stopped{ExperimentModel::normal_optional_stopping(sigma, stop_n),
                                  boundary};
  const auto pair = check_slp_pair(fixed, stopped, {-1.0, 0.0, 1.0});
  ensure(pair.has_value(), "slp_partner_for_stop: boundary pair failed the proportionality check");
  return *pair;
}

}  // namespace slplab
