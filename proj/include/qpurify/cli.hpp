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

// Command-line front end. Lives in a header so the test suite can drive it
// in-process; tools/qpurify.cpp is a thin main().
//
//   qpurify stats --n 6 --c1 0.75
//   qpurify run   --n 6 --c1 0.75 --trials 1000 --purify --seed 42
//   qpurify sweep --n 6 --c1-min 0.5 --c1-max 1 --c1-steps 11 --compare purify
//   qpurify trace --n 6 --c1 0.75
//
// Exit codes: 0 success, 1 runtime or I/O failure, 2 usage error.

#pragma once

#include "CLI11.hpp"
#include "json.hpp"

#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "qpurify/channel_purify.hpp"
#include "qpurify/errors.hpp"
#include "qpurify/experiment_harness.hpp"
#include "qpurify/output_record.hpp"

namespace qpurify::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Flags {
  int n = 6;
  double c1 = 0.75;  // also the trace default
  int trials = 40000;
  std::string strategy = "adaptive";
  bool purify = true;
  std::string compare = "purify";
  int grid_size = kDefaultGridSize;
  std::uint64_t seed = 1;
  int workers = default_workers();
  std::string weighting = "exact";
  std::string out;
  std::string config;
  double c1_min = 0.5;
  double c1_max = 1.0;
  int c1_steps = 11;
};

namespace detail {

inline void add_common(CLI::App& sub, Flags& f) {
  sub.add_option("--n", f.n, "number of qubits sent (even)");
  sub.add_option("--c1", f.c1, "depolarizing parameter c1 in [0.5, 1]");
  sub.add_option("--trials", f.trials, "Monte Carlo trials");
  sub.add_option("--strategy", f.strategy, "adaptive | random");
  sub.add_flag("--purify,!--no-purify", f.purify, "purify before estimating");
  sub.add_option("--grid-size", f.grid_size, "Bloch-sphere grid points");
  sub.add_option("--seed", f.seed, "master seed");
  sub.add_option("--workers", f.workers, "worker threads");
  sub.add_option("--weighting", f.weighting, "exact | sampled");
  sub.add_option("--out", f.out, "output path (default: stdout)");
  sub.add_option("--config", f.config, "JSON file mirroring the flags");
}

// Fills every flag not given on the command line from the config file.
inline void apply_config_file(CLI::App& sub, Flags& f) {
  if (f.config.empty()) return;
  std::ifstream in(f.config);
  if (!in) throw std::runtime_error("cannot open config file " + f.config);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("malformed config file: ") + e.what());
  }
  auto unset = [&](const char* flag) {
    const CLI::Option* opt = sub.get_option_no_throw(flag);
    return opt != nullptr && opt->count() == 0;
  };
  auto take = [&](const char* key, const char* flag, auto& dst) {
    if (j.contains(key) && unset(flag)) dst = j.at(key).get<std::decay_t<decltype(dst)>>();
  };
  try {
    take("n", "--n", f.n);
    take("c1", "--c1", f.c1);
    take("trials", "--trials", f.trials);
    take("strategy", "--strategy", f.strategy);
    if (j.contains("purify") && unset("--purify") && unset("--no-purify")) {
      f.purify = j.at("purify").get<bool>();
    }
    take("compare", "--compare", f.compare);
    take("grid-size", "--grid-size", f.grid_size);
    take("seed", "--seed", f.seed);
    take("workers", "--workers", f.workers);
    take("weighting", "--weighting", f.weighting);
    take("out", "--out", f.out);
    take("c1-min", "--c1-min", f.c1_min);
    take("c1-max", "--c1-max", f.c1_max);
    take("c1-steps", "--c1-steps", f.c1_steps);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("bad value in config file: ") + e.what());
  }
}

inline ScenarioConfig scenario_from(const Flags& f) {
  ScenarioConfig cfg;
  cfg.n_qubits = f.n;
  cfg.c1 = f.c1;
  cfg.trials = f.trials;
  cfg.purify = f.purify;
  cfg.grid_size = f.grid_size;
  cfg.master_seed = f.seed;
  try {
    cfg.strategy = parse_strategy(f.strategy);
    cfg.weighting = parse_weighting(f.weighting);
    cfg.validate();
  } catch (const std::logic_error& e) {
    throw UsageError(e.what());
  }
  if (f.workers < 1) throw UsageError("workers must be >= 1");
  return cfg;
}

inline void emit(const Flags& f, const std::string& text, std::ostream& out) {
  if (f.out.empty()) {
    out << text;
    return;
  }
  std::ofstream file(f.out, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open output file " + f.out);
  file << text;
  file.flush();
  if (!file) throw std::runtime_error("failed writing output file " + f.out);
}

// CSV goes to --out; the full record (config echo, timestamp, rows) goes to
// a sibling <out>.meta.json.
inline void emit_table(const Flags& f, const char* header, const OutputRecord& rec,
                       std::ostream& out) {
  emit(f, write_csv(header, rec.rows), out);
  if (!f.out.empty()) {
    Flags meta = f;
    meta.out = f.out + ".meta.json";
    emit(meta, dump_record(rec), out);
  }
}

inline std::vector<double> c1_grid(const Flags& f) {
  if (f.c1_steps < 1) throw UsageError("c1-steps must be >= 1");
  if (!(f.c1_min >= 0.5 && f.c1_max <= 1.0 && f.c1_min <= f.c1_max)) {
    throw UsageError("c1 range must satisfy 0.5 <= c1-min <= c1-max <= 1");
  }
  if (f.c1_steps == 1) return {round_sig10(f.c1_min)};
  std::vector<double> v;
  for (int i = 0; i < f.c1_steps; ++i) {
    v.push_back(round_sig10(f.c1_min + (f.c1_max - f.c1_min) * i / (f.c1_steps - 1)));
  }
  return v;
}

inline std::string stats_table(int n, double c1) {
  const ChannelSpec channel(c1);
  const auto dist = purification_distribution(n, channel);
  std::ostringstream os;
  os << "M,p_M,f_M\n";
  double sum_p = 0.0;
  double sum_pf = 0.0;
  for (const auto& [m, p] : dist.probs) {
    const double f = single_qubit_fidelity(m, channel);
    sum_p += p;
    sum_pf += p * f;
    if (p > 0.0) os << m << ',' << format_real(p) << ',' << format_real(f) << '\n';
  }
  os << "\nsum_p_M," << format_real(sum_p) << '\n'
     << "sum_p_M_f_M," << format_real(sum_pf) << '\n'
     << "c1," << format_real(c1) << '\n';
  return os.str();
}

}  // namespace detail

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Purification-assisted adaptive qubit estimation"};
  app.name("qpurify");
  app.require_subcommand(1);
  Flags f;

  auto* stats = app.add_subcommand("stats", "purification statistics p_M, f_M");
  stats->add_option("--n", f.n, "number of qubits sent (even)");
  stats->add_option("--c1", f.c1, "depolarizing parameter c1 in [0.5, 1]");
  stats->add_option("--out", f.out, "output path (default: stdout)");

  auto* run = app.add_subcommand("run", "one Monte Carlo scenario, JSON output");
  detail::add_common(*run, f);

  auto* sweep = app.add_subcommand("sweep", "c1 sweep, CSV output");
  detail::add_common(*sweep, f);
  sweep->add_option("--compare", f.compare, "purify | strategy");
  sweep->add_option("--c1-min", f.c1_min);
  sweep->add_option("--c1-max", f.c1_max);
  sweep->add_option("--c1-steps", f.c1_steps);

  auto* trace = app.add_subcommand("trace", "per-step fidelity curves, CSV output");
  detail::add_common(*trace, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "qpurify: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (stats->parsed()) {
      if (f.n < 2 || f.n % 2 != 0) {
        throw UsageError("--n must be an even integer >= 2 (got " + std::to_string(f.n) + ")");
      }
      if (f.n > kDefaultMaxQubits) throw UsageError("--n exceeds the qubit limit");
      if (!(f.c1 >= 0.5 && f.c1 <= 1.0)) throw UsageError("--c1 must lie in [0.5, 1]");
      detail::emit(f, detail::stats_table(f.n, f.c1), out);
      return kExitOk;
    }

    CLI::App* sub = run->parsed() ? run : sweep->parsed() ? sweep : trace;
    detail::apply_config_file(*sub, f);
    const ScenarioConfig cfg = detail::scenario_from(f);

    OutputRecord rec;
    rec.generated_at = utc_timestamp();
    rec.config = config_to_json(cfg);

    if (run->parsed()) {
      rec.rows = run_rows(run_scenario(cfg, f.workers));
      detail::emit(f, dump_record(rec), out);
    } else if (sweep->parsed()) {
      Comparison cmp;
      if (f.compare == "purify") {
        cmp = Comparison::purify;
      } else if (f.compare == "strategy") {
        cmp = Comparison::strategy;
      } else {
        throw UsageError("--compare must be purify or strategy");
      }
      const auto c1s = detail::c1_grid(f);
      rec.config["compare"] = f.compare;
      rec.config["c1Values"] = c1s;
      rec.rows = sweep_rows(sweep_c1(cfg, c1s, cmp, f.workers));
      detail::emit_table(f, kSweepHeader, rec, out);
    } else {
      rec.rows = trace_rows(fidelity_trace(cfg, f.workers));
      detail::emit_table(f, kTraceHeader, rec, out);
    }
    return kExitOk;
  } catch (const UsageError& e) {
    err << "qpurify: usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "qpurify: error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace qpurify::cli
