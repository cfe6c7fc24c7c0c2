// Copyright 2026 The qpurify Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Monte Carlo driver: sample uniformly distributed true states, run the
// measure/update/estimate loop with or without purification, and aggregate
// fidelities.
//
// Random streams per trial index:
//   kTruthStream         true state (shared by every pipeline: common random
//                        numbers for paired comparisons)
//   kBranchSampleStream  draw of M in sampled weighting mode
//   kMeasureStream + m   directions and outcomes for an ensemble of m qubits;
//                        the unpurified run and the M = N purified branch
//                        share a stream.

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "qpurify/bayes_estimator.hpp"
#include "qpurify/channel_purify.hpp"
#include "qpurify/errors.hpp"
#include "qpurify/measurement_engine.hpp"
#include "qpurify/quantum_core.hpp"
#include "qpurify/rng.hpp"

namespace qpurify {

enum class Strategy { adaptive, random };
enum class Weighting { exact, sampled };

inline std::string to_string(Strategy s) {
  return s == Strategy::adaptive ? "adaptive" : "random";
}
inline std::string to_string(Weighting w) {
  return w == Weighting::exact ? "exact" : "sampled";
}

struct ScenarioConfig {
  int n_qubits = 6;
  double c1 = 0.75;
  int trials = 40000;
  Strategy strategy = Strategy::adaptive;
  bool purify = true;
  int grid_size = kDefaultGridSize;
  std::uint64_t master_seed = 1;
  Weighting weighting = Weighting::exact;

  void validate() const {
    if (n_qubits < 2 || n_qubits % 2 != 0) {
      throw DomainError("n must be an even integer >= 2, got " + std::to_string(n_qubits));
    }
    if (n_qubits > kDefaultMaxQubits) {
      throw CapacityError("n must not exceed " + std::to_string(kDefaultMaxQubits));
    }
    if (trials < 1) throw DomainError("trials must be >= 1");
    if (!(c1 >= 0.5 && c1 <= 1.0)) throw DomainError("c1 must lie in [0.5, 1]");
    if (grid_size < 2 || grid_size % 2 != 0) {
      throw DomainError("grid size must be even and >= 2");
    }
  }

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

struct TrialTrace {
  PureQubit truth;
  std::vector<std::pair<int, double>> m_weights;  // (M, weight) per branch run
  std::vector<double> step_fidelities;            // one per measurement step
  double final_fidelity = 0.0;
};

struct SweepRow {
  double c1 = 0.0;
  double mean_fidelity = 0.0;
  double std_error = 0.0;
  Strategy strategy = Strategy::adaptive;
  bool purify = false;
  int trials = 0;
  int n_qubits = 0;
  std::uint64_t seed = 0;
};

struct StepCurve {
  std::vector<double> mean;
  std::vector<double> std_error;
};

struct ScenarioResult {
  SweepRow row;
  StepCurve curve;
};

using SweepSummary = std::vector<SweepRow>;

namespace streams {
inline constexpr std::uint64_t kTruthStream = 0;
inline constexpr std::uint64_t kBranchSampleStream = 1;
inline constexpr std::uint64_t kMeasureStream = 100;
}  // namespace streams

inline PureQubit sample_true_state(RandomStream& rng) { return random_sphere_point(rng); }

namespace detail {

// Runs one measure/update/estimate loop and returns the fidelity of the
// running estimate after each step, padded to `steps` by carrying the last
// value forward (the prior estimate when nothing is measured).
template <typename Ensemble>
std::vector<double> estimation_loop(Ensemble& ensemble, int measurements, int steps,
                                    Strategy strategy, const PureQubit& truth,
                                    const std::shared_ptr<const SphereGrid>& grid,
                                    RandomStream& rng) {
  Posterior post(grid);
  std::vector<double> fid;
  fid.reserve(steps);
  double last = estimation_fidelity(final_estimate(post), truth);
  for (int n = 0; n < measurements; ++n) {
    const PureQubit dir = strategy == Strategy::adaptive
                              ? select_direction_adaptive(post, *grid)
                              : select_direction_random(rng);
    const Outcome o = ensemble.measure(dir, rng);
    post.update(dir, o);
    last = estimation_fidelity(final_estimate(post), truth);
    fid.push_back(last);
  }
  fid.resize(steps, last);
  return fid;
}

}  // namespace detail

inline TrialTrace run_trial_unpurified(const ScenarioConfig& cfg, const PureQubit& truth,
                                       const std::shared_ptr<const SphereGrid>& grid,
                                       std::uint64_t trial_index) {
  RandomStream rng(cfg.master_seed, trial_index, streams::kMeasureStream + cfg.n_qubits);
  SeparableEnsemble ens(truth, ChannelSpec(cfg.c1), cfg.n_qubits);
  TrialTrace t;
  t.truth = truth;
  t.m_weights = {{cfg.n_qubits, 1.0}};
  t.step_fidelities = detail::estimation_loop(ens, cfg.n_qubits, cfg.n_qubits,
                                              cfg.strategy, truth, grid, rng);
  t.final_fidelity = t.step_fidelities.back();
  return t;
}

inline std::vector<double> run_purified_branch(const ScenarioConfig& cfg,
                                               const PureQubit& truth, int m,
                                               const std::shared_ptr<const SphereGrid>& grid,
                                               std::uint64_t trial_index) {
  RandomStream rng(cfg.master_seed, trial_index, streams::kMeasureStream + m);
  EntangledEnsemble ens(purified_state(m, ChannelSpec(cfg.c1), truth).dense);
  return detail::estimation_loop(ens, m, cfg.n_qubits, cfg.strategy, truth, grid, rng);
}

inline TrialTrace run_trial_purified(const ScenarioConfig& cfg, const PureQubit& truth,
                                     const std::shared_ptr<const SphereGrid>& grid,
                                     std::uint64_t trial_index) {
  const ChannelSpec channel(cfg.c1);
  const auto dist = purification_distribution(cfg.n_qubits, channel);
  TrialTrace t;
  t.truth = truth;
  t.step_fidelities.assign(cfg.n_qubits, 0.0);

  if (cfg.weighting == Weighting::sampled) {
    RandomStream pick(cfg.master_seed, trial_index, streams::kBranchSampleStream);
    const double u = pick.uniform();
    double acc = 0.0;
    int chosen = cfg.n_qubits;
    for (const auto& [m, p] : dist.probs) {
      acc += p;
      if (u < acc && p > 0.0) {
        chosen = m;
        break;
      }
    }
    t.m_weights = {{chosen, 1.0}};
    t.step_fidelities = run_purified_branch(cfg, truth, chosen, grid, trial_index);
  } else {
    for (const auto& [m, p] : dist.probs) {
      if (p == 0.0) continue;
      t.m_weights.emplace_back(m, p);
      const auto fid = run_purified_branch(cfg, truth, m, grid, trial_index);
      for (int n = 0; n < cfg.n_qubits; ++n) t.step_fidelities[n] += p * fid[n];
    }
  }
  t.final_fidelity = t.step_fidelities.back();
  return t;
}

inline TrialTrace run_trial(const ScenarioConfig& cfg,
                            const std::shared_ptr<const SphereGrid>& grid,
                            std::uint64_t trial_index) {
  RandomStream truth_rng(cfg.master_seed, trial_index, streams::kTruthStream);
  const PureQubit truth = sample_true_state(truth_rng);
  return cfg.purify ? run_trial_purified(cfg, truth, grid, trial_index)
                    : run_trial_unpurified(cfg, truth, grid, trial_index);
}

// Evaluates fn(i) for i in [0, count) on `workers` threads. Results are
// stored by index, so the output does not depend on scheduling.
template <typename Result, typename Fn>
std::vector<Result> parallel_map(int count, int workers, Fn fn) {
  std::vector<Result> out(count);
  workers = std::clamp(workers, 1, std::max(1, count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          out[i] = fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mu);
          if (!failure) failure = std::current_exception();
          next = count;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

inline int default_workers() {
  return std::max(1u, std::thread::hardware_concurrency());
}

// Mean and SD/sqrt(n), accumulated in index order.
inline std::pair<double, double> mean_and_std_error(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  if (xs.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1.0)) / std::sqrt(n)};
}

inline std::vector<TrialTrace> run_trials(const ScenarioConfig& cfg, int workers) {
  cfg.validate();
  auto grid = std::make_shared<const SphereGrid>(cfg.grid_size);
  return parallel_map<TrialTrace>(cfg.trials, workers, [&](int i) {
    return run_trial(cfg, grid, static_cast<std::uint64_t>(i));
  });
}

inline ScenarioResult summarize(const ScenarioConfig& cfg,
                                const std::vector<TrialTrace>& traces) {
  ScenarioResult res;
  std::vector<double> finals;
  finals.reserve(traces.size());
  for (const auto& t : traces) finals.push_back(t.final_fidelity);
  const auto [mean, se] = mean_and_std_error(finals);
  res.row = {cfg.c1, mean, se, cfg.strategy, cfg.purify, cfg.trials, cfg.n_qubits,
             cfg.master_seed};
  for (int n = 0; n < cfg.n_qubits; ++n) {
    std::vector<double> step;
    step.reserve(traces.size());
    for (const auto& t : traces) step.push_back(t.step_fidelities[n]);
    const auto [m, s] = mean_and_std_error(step);
    res.curve.mean.push_back(m);
    res.curve.std_error.push_back(s);
  }
  return res;
}

inline ScenarioResult run_scenario(const ScenarioConfig& cfg, int workers = default_workers()) {
  return summarize(cfg, run_trials(cfg, workers));
}

enum class Comparison { purify, strategy };

// One row per (c1, purify) cell, or per (c1, strategy) cell with purify held
// at cfg.purify.
inline SweepSummary sweep_c1(const ScenarioConfig& cfg, const std::vector<double>& c1_values,
                             Comparison compare, int workers = default_workers()) {
  SweepSummary rows;
  for (double c1 : c1_values) {
    if (!(c1 >= 0.5 && c1 <= 1.0)) throw DomainError("sweep: c1 values must lie in [0.5, 1]");
    ScenarioConfig cell = cfg;
    cell.c1 = c1;
    if (compare == Comparison::purify) {
      for (bool purify : {true, false}) {
        cell.purify = purify;
        rows.push_back(run_scenario(cell, workers).row);
      }
    } else {
      for (Strategy s : {Strategy::adaptive, Strategy::random}) {
        cell.strategy = s;
        rows.push_back(run_scenario(cell, workers).row);
      }
    }
  }
  return rows;
}

struct FidelityTraces {
  ScenarioResult purified;
  ScenarioResult unpurified;
};

inline FidelityTraces fidelity_trace(const ScenarioConfig& cfg, int workers = default_workers()) {
  ScenarioConfig p = cfg;
  p.purify = true;
  ScenarioConfig u = cfg;
  u.purify = false;
  return {run_scenario(p, workers), run_scenario(u, workers)};
}

}  // namespace qpurify
