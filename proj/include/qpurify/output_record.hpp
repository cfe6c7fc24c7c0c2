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

// Serialized results: JSON records for single runs, CSV tables for sweeps and
// fidelity traces. All reals are rounded to 10 significant digits when the
// record is built, so writing and re-parsing reproduces the record exactly.

#pragma once

#include "json.hpp"

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "qpurify/errors.hpp"
#include "qpurify/experiment_harness.hpp"

namespace qpurify {

inline constexpr const char* kSchemaVersion = "qpurify/1";
inline constexpr const char* kSweepHeader =
    "c1,strategy,purify,n_qubits,trials,mean_fidelity,std_error,seed";
inline constexpr const char* kTraceHeader = "n,pipeline,mean_fidelity,std_error";

inline std::string format_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

inline double round_sig10(double x) { return std::strtod(format_real(x).c_str(), nullptr); }

inline Strategy parse_strategy(const std::string& s) {
  if (s == "adaptive") return Strategy::adaptive;
  if (s == "random") return Strategy::random;
  throw DomainError("unknown strategy '" + s + "'");
}

inline Weighting parse_weighting(const std::string& s) {
  if (s == "exact") return Weighting::exact;
  if (s == "sampled") return Weighting::sampled;
  throw DomainError("unknown weighting '" + s + "'");
}

inline nlohmann::json config_to_json(const ScenarioConfig& cfg) {
  return {{"n", cfg.n_qubits},
          {"c1", cfg.c1},
          {"trials", cfg.trials},
          {"strategy", to_string(cfg.strategy)},
          {"purify", cfg.purify},
          {"gridSize", cfg.grid_size},
          {"seed", cfg.master_seed},
          {"weighting", to_string(cfg.weighting)}};
}

inline ScenarioConfig config_from_json(const nlohmann::json& j) {
  ScenarioConfig cfg;
  cfg.n_qubits = j.at("n").get<int>();
  cfg.c1 = j.at("c1").get<double>();
  cfg.trials = j.at("trials").get<int>();
  cfg.strategy = parse_strategy(j.at("strategy").get<std::string>());
  cfg.purify = j.at("purify").get<bool>();
  cfg.grid_size = j.at("gridSize").get<int>();
  cfg.master_seed = j.at("seed").get<std::uint64_t>();
  cfg.weighting = parse_weighting(j.at("weighting").get<std::string>());
  return cfg;
}

struct OutputRecord {
  std::string schema_version = kSchemaVersion;
  std::string generated_at;
  nlohmann::json config;  // ScenarioConfig echo plus command-specific extras
  nlohmann::json rows;

  friend bool operator==(const OutputRecord&, const OutputRecord&) = default;
};

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

inline nlohmann::json to_json(const OutputRecord& rec) {
  return {{"schemaVersion", rec.schema_version},
          {"generatedAt", rec.generated_at},
          {"config", rec.config},
          {"rows", rec.rows}};
}

inline OutputRecord record_from_json(const nlohmann::json& j) {
  OutputRecord rec;
  rec.schema_version = j.at("schemaVersion").get<std::string>();
  rec.generated_at = j.at("generatedAt").get<std::string>();
  rec.config = j.at("config");
  rec.rows = j.at("rows");
  return rec;
}

inline std::string dump_record(const OutputRecord& rec) { return to_json(rec).dump(2) + "\n"; }

inline OutputRecord parse_record(const std::string& text) {
  return record_from_json(nlohmann::json::parse(text));
}

inline nlohmann::json rounded(const std::vector<double>& xs) {
  nlohmann::json arr = nlohmann::json::array();
  for (double x : xs) arr.push_back(round_sig10(x));
  return arr;
}

// Payload of `run`: summary numbers and the per-step curve.
inline nlohmann::json run_rows(const ScenarioResult& res) {
  return {{"meanFidelity", round_sig10(res.row.mean_fidelity)},
          {"standardError", round_sig10(res.row.std_error)},
          {"stepCurve", rounded(res.curve.mean)},
          {"stepStdError", rounded(res.curve.std_error)}};
}

inline nlohmann::json sweep_rows(const SweepSummary& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    arr.push_back({{"c1", round_sig10(r.c1)},
                   {"strategy", to_string(r.strategy)},
                   {"purify", r.purify},
                   {"n_qubits", r.n_qubits},
                   {"trials", r.trials},
                   {"mean_fidelity", round_sig10(r.mean_fidelity)},
                   {"std_error", round_sig10(r.std_error)},
                   {"seed", r.seed}});
  }
  return arr;
}

inline nlohmann::json trace_rows(const FidelityTraces& tr) {
  nlohmann::json arr = nlohmann::json::array();
  auto emit = [&](const char* name, const StepCurve& c) {
    for (std::size_t n = 0; n < c.mean.size(); ++n) {
      arr.push_back({{"n", static_cast<int>(n + 1)},
                     {"pipeline", name},
                     {"mean_fidelity", round_sig10(c.mean[n])},
                     {"std_error", round_sig10(c.std_error[n])}});
    }
  };
  emit("purified", tr.purified.curve);
  emit("unpurified", tr.unpurified.curve);
  return arr;
}

namespace detail {

inline std::string csv_cell(const nlohmann::json& v) {
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  return format_real(v.get<double>());
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

inline std::vector<std::string> split_header(const char* header) {
  return split_csv_line(header);
}

}  // namespace detail

// Writes `rows` (array of flat objects) under the given header.
inline std::string write_csv(const char* header, const nlohmann::json& rows) {
  std::ostringstream os;
  const auto columns = detail::split_header(header);
  os << header << "\n";
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c) os << ',';
      os << detail::csv_cell(row.at(columns[c]));
    }
    os << "\n";
  }
  return os.str();
}

// Inverse of write_csv for the sweep and trace schemas.
inline nlohmann::json parse_csv(const char* header, const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line != header) {
    throw DomainError("CSV header mismatch");
  }
  const auto columns = detail::split_header(header);
  nlohmann::json rows = nlohmann::json::array();
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto cells = detail::split_csv_line(line);
    if (cells.size() != columns.size()) throw DomainError("CSV row has wrong arity");
    nlohmann::json row = nlohmann::json::object();
    for (std::size_t c = 0; c < columns.size(); ++c) {
      const std::string& col = columns[c];
      const std::string& v = cells[c];
      if (col == "strategy" || col == "pipeline") {
        row[col] = v;
      } else if (col == "purify") {
        row[col] = (v == "true");
      } else if (col == "seed") {
        row[col] = static_cast<std::uint64_t>(std::stoull(v));
      } else if (col == "n" || col == "n_qubits" || col == "trials") {
        row[col] = std::stoi(v);
      } else {
        row[col] = std::strtod(v.c_str(), nullptr);
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace qpurify
