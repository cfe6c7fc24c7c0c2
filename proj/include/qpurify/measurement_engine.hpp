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

// Sequential single-qubit projective measurements on the two kinds of
// ensemble the estimator can face: N independent depolarized copies, or M
// entangled purified qubits whose state collapses after every outcome.
//
// The true axis is private to the ensembles. Estimator code sees only the
// directions it chose and the outcomes returned.

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qpurify/channel_purify.hpp"
#include "qpurify/errors.hpp"
#include "qpurify/quantum_core.hpp"
#include "qpurify/rng.hpp"

namespace qpurify {

struct Measurement {
  PureQubit direction;
  Outcome outcome;
};

using MeasurementRecord = std::vector<Measurement>;

class SeparableEnsemble {
 public:
  SeparableEnsemble(const PureQubit& axis, const ChannelSpec& channel, int count)
      : axis_(axis.bloch()), channel_(channel), remaining_(count) {
    if (count < 0) throw DomainError("SeparableEnsemble: negative qubit count");
  }

  int remaining() const { return remaining_; }

  // (1 + (c1 - c0) m.n) / 2
  double outcome_probability(const PureQubit& direction) const {
    if (remaining_ < 1) throw StateError("SeparableEnsemble: ensemble exhausted");
    const double bias = channel_.c1() - channel_.c0();
    return std::clamp(0.5 * (1.0 + bias * direction.bloch().dot(axis_)), 0.0, 1.0);
  }

  Outcome measure(const PureQubit& direction, RandomStream& rng) {
    const double p1 = outcome_probability(direction);
    --remaining_;
    return rng.uniform() < p1 ? Outcome::one : Outcome::zero;
  }

 private:
  Vec3 axis_;
  ChannelSpec channel_;
  int remaining_;
};

inline double separable_outcome_probability(const SeparableEnsemble& ens,
                                            const PureQubit& direction) {
  return ens.outcome_probability(direction);
}

inline Outcome measure_separable(SeparableEnsemble& ens, const PureQubit& direction,
                                 RandomStream& rng) {
  return ens.measure(direction, rng);
}

// Always measures the lowest-index unmeasured qubit.
class EntangledEnsemble {
 public:
  explicit EntangledEnsemble(DensityOperator initial)
      : current_(std::move(initial)), initial_qubits_(current_.num_qubits()) {}

  const DensityOperator& current() const { return current_; }
  int measured_count() const { return measured_; }
  int remaining() const { return current_.num_qubits(); }
  int initial_qubits() const { return initial_qubits_; }

  double outcome_probability(const PureQubit& direction) const {
    if (current_.num_qubits() < 1) {
      throw StateError("EntangledEnsemble: no qubits left to measure");
    }
    // <m| Tr_{2..k}(rho) |m>
    const DensityOperator first = partial_trace_to_first(current_);
    return std::clamp(first.expectation(bloch_to_state(direction)), 0.0, 1.0);
  }

  Outcome measure(const PureQubit& direction, RandomStream& rng) {
    if (current_.num_qubits() < 1) {
      throw StateError("EntangledEnsemble: no qubits left to measure");
    }
    const double p1 = outcome_probability(direction);
    const Outcome outcome = rng.uniform() < p1 ? Outcome::one : Outcome::zero;
    ProjectionResult r = apply_single_qubit_projector(current_, 1, direction, outcome);
    if (!r.valid()) {
      throw StateError("EntangledEnsemble: collapse onto unreachable branch (p = " +
                       std::to_string(r.probability) + ")");
    }
    current_ = std::move(*r.state);
    ++measured_;
    return outcome;
  }

 private:
  DensityOperator current_;
  int initial_qubits_;
  int measured_ = 0;
};

inline double entangled_outcome_probability(const EntangledEnsemble& ens,
                                            const PureQubit& direction) {
  return ens.outcome_probability(direction);
}

inline Outcome measure_entangled(EntangledEnsemble& ens, const PureQubit& direction,
                                 RandomStream& rng) {
  return ens.measure(direction, rng);
}

struct OutcomePath {
  std::vector<Outcome> outcomes;
  double probability;
};

// Every outcome sequence of measuring qubits 1..m of `state` in order along
// `directions`, with exact path probabilities from repeated conditioning.
// Unreachable prefixes are reported with probability zero.
inline std::vector<OutcomePath> exhaustive_outcome_tree(
    const DensityOperator& state, const std::vector<PureQubit>& directions) {
  constexpr int kMaxTreeQubits = 4;
  if (state.num_qubits() > kMaxTreeQubits) {
    throw CapacityError("exhaustive_outcome_tree: at most 4 qubits supported");
  }
  if (static_cast<int>(directions.size()) != state.num_qubits()) {
    throw DomainError("exhaustive_outcome_tree: need one direction per qubit");
  }
  std::vector<OutcomePath> paths;
  struct Node {
    std::vector<Outcome> prefix;
    double probability;
    std::optional<DensityOperator> rho;
  };
  std::vector<Node> frontier{{{}, 1.0, state}};
  for (const PureQubit& dir : directions) {
    std::vector<Node> next;
    for (Node& node : frontier) {
      for (Outcome o : {Outcome::zero, Outcome::one}) {
        Node child{node.prefix, 0.0, std::nullopt};
        child.prefix.push_back(o);
        if (node.rho) {
          ProjectionResult r = apply_single_qubit_projector(*node.rho, 1, dir, o);
          child.probability = node.probability * r.probability;
          child.rho = std::move(r.state);
        }
        next.push_back(std::move(child));
      }
    }
    frontier = std::move(next);
  }
  paths.reserve(frontier.size());
  for (Node& node : frontier) paths.push_back({std::move(node.prefix), node.probability});
  return paths;
}

}  // namespace qpurify
