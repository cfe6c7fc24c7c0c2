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

// Bayesian single-qubit estimator on a discretized Bloch sphere.
//
// The posterior over candidate pure states starts uniform and is multiplied
// by the pure-state likelihood (1 +/- m.r)/2 after each outcome. Adaptive
// measurement picks the direction whose predicted binary outcome has maximal
// Shannon entropy; the final estimate is the posterior maximum, refined off
// the grid by a shrinking pattern search.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <numbers>
#include <utility>
#include <vector>

#include "qpurify/errors.hpp"
#include "qpurify/measurement_engine.hpp"
#include "qpurify/quantum_core.hpp"
#include "qpurify/rng.hpp"

namespace qpurify {

inline constexpr int kDefaultGridSize = 1024;

// Fibonacci-spiral points, mirrored so that point G-1-i = -point i. The
// antipodal symmetry makes the uniform-prior mean vanish to rounding, which
// lets the tie-break rule resolve the first adaptive direction exactly.
class SphereGrid {
 public:
  explicit SphereGrid(int size = kDefaultGridSize) {
    if (size < 2 || size % 2 != 0) {
      throw DomainError("SphereGrid: size must be even and >= 2");
    }
    const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
    points_.resize(size);
    for (int i = 0; i < size / 2; ++i) {
      const double z = 1.0 - (2.0 * i + 1.0) / size;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = golden_angle * i;
      points_[i] = Vec3(r * std::cos(phi), r * std::sin(phi), z);
      points_[size - 1 - i] = -points_[i];
    }
    qubits_.reserve(size);
    for (const Vec3& p : points_) qubits_.push_back(PureQubit::from_bloch(p));
  }

  int size() const { return static_cast<int>(points_.size()); }
  const Vec3& point(int i) const { return points_[i]; }
  const PureQubit& qubit(int i) const { return qubits_[i]; }
  const std::vector<Vec3>& points() const { return points_; }

  // Typical nearest-neighbour angle, sqrt(4 pi / G).
  double spacing() const { return std::sqrt(4.0 * std::numbers::pi / size()); }

 private:
  std::vector<Vec3> points_;
  std::vector<PureQubit> qubits_;
};

inline double likelihood(const Vec3& candidate, const Vec3& direction, Outcome outcome) {
  const double p1 = std::clamp(0.5 * (1.0 + direction.dot(candidate)), 0.0, 1.0);
  return outcome == Outcome::one ? p1 : 1.0 - p1;
}

inline double likelihood(const PureQubit& candidate, const PureQubit& direction,
                         Outcome outcome) {
  return likelihood(candidate.bloch(), direction.bloch(), outcome);
}

// Log of the unnormalized posterior density (product of likelihoods) at an
// arbitrary point of the sphere.
inline double log_record_density(const Vec3& candidate,
                                 const std::vector<Vec3>& directions,
                                 const MeasurementRecord& record) {
  double s = 0.0;
  for (std::size_t i = 0; i < record.size(); ++i) {
    s += std::log(likelihood(candidate, directions[i], record[i].outcome));
  }
  return s;
}

class Posterior {
 public:
  explicit Posterior(std::shared_ptr<const SphereGrid> grid)
      : grid_(std::move(grid)),
        log_weights_(grid_->size(), -std::log(static_cast<double>(grid_->size()))) {}

  const SphereGrid& grid() const { return *grid_; }
  const std::shared_ptr<const SphereGrid>& grid_ptr() const { return grid_; }
  const MeasurementRecord& record() const { return record_; }
  const std::vector<Vec3>& record_directions() const { return directions_; }
  const std::vector<double>& log_weights() const { return log_weights_; }

  std::vector<double> weights() const {
    std::vector<double> w(log_weights_.size());
    std::transform(log_weights_.begin(), log_weights_.end(), w.begin(),
                   [](double lw) { return std::exp(lw); });
    return w;
  }

  // Bayes step: multiply by the likelihood of the observed outcome and
  // renormalize in log space.
  void update(const PureQubit& direction, Outcome outcome) {
    const Vec3 m = direction.bloch();
    std::vector<double> next(log_weights_.size());
    double peak = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < next.size(); ++i) {
      next[i] = log_weights_[i] + std::log(likelihood(grid_->point(i), m, outcome));
      peak = std::max(peak, next[i]);
    }
    if (!std::isfinite(peak)) {
      throw StateError("Posterior::update: every grid point has zero likelihood");
    }
    double total = 0.0;
    for (double lw : next) total += std::exp(lw - peak);
    const double log_norm = peak + std::log(total);
    for (double& lw : next) lw -= log_norm;
    log_weights_ = std::move(next);
    record_.push_back({direction, outcome});
    directions_.push_back(m);
  }

  Vec3 mean_bloch() const {
    Vec3 mean = Vec3::Zero();
    for (std::size_t i = 0; i < log_weights_.size(); ++i) {
      mean += std::exp(log_weights_[i]) * grid_->point(i);
    }
    return mean;
  }

 private:
  std::shared_ptr<const SphereGrid> grid_;
  std::vector<double> log_weights_;
  MeasurementRecord record_;
  std::vector<Vec3> directions_;  // Bloch vectors of record_ directions
};

inline Posterior update(Posterior post, const PureQubit& direction, Outcome outcome) {
  post.update(direction, outcome);
  return post;
}

inline Vec3 posterior_mean_bloch(const Posterior& post) { return post.mean_bloch(); }

// sum_r w(r) (1 + m.r)/2, which equals (1 + m.mean)/2 by linearity.
inline double predicted_outcome_probability(const Posterior& post,
                                            const PureQubit& direction) {
  const Vec3 m = direction.bloch();
  const auto& lw = post.log_weights();
  double p = 0.0;
  for (std::size_t i = 0; i < lw.size(); ++i) {
    p += std::exp(lw[i]) * 0.5 * (1.0 + m.dot(post.grid().point(i)));
  }
  return std::clamp(p, 0.0, 1.0);
}

inline double binary_entropy(double p) {
  auto term = [](double x) { return x > 0.0 ? -x * std::log(x) : 0.0; };
  return term(p) + term(1.0 - p);
}

inline double expected_information_gain(const Posterior& post, const PureQubit& direction) {
  return binary_entropy(predicted_outcome_probability(post, direction));
}

// Keys within this distance are treated as ties (lowest index wins).
inline constexpr double kSelectionTieTolerance = 1e-12;

// Entropy of the predicted outcome depends on the direction only through
// |m.mean| and decreases strictly in it, so the maximizer of the expected
// information gain is the search point most orthogonal to the posterior mean.
inline PureQubit select_direction_adaptive(const Posterior& post,
                                           const SphereGrid& search_grid) {
  const Vec3 mean = post.mean_bloch();
  int best = 0;
  double best_key = std::abs(search_grid.point(0).dot(mean));
  for (int i = 1; i < search_grid.size(); ++i) {
    const double key = std::abs(search_grid.point(i).dot(mean));
    if (key < best_key - kSelectionTieTolerance) {
      best = i;
      best_key = key;
    }
  }
  return search_grid.qubit(best);
}

// Uniform on the sphere: cos(theta) ~ U[-1, 1], phi ~ U[0, 2 pi).
inline PureQubit random_sphere_point(RandomStream& rng) {
  const double cos_theta = 2.0 * rng.uniform() - 1.0;
  const double phi = 2.0 * std::numbers::pi * rng.uniform();
  return PureQubit(std::acos(std::clamp(cos_theta, -1.0, 1.0)), phi);
}

inline PureQubit select_direction_random(RandomStream& rng) {
  return random_sphere_point(rng);
}

struct EstimateResult {
  PureQubit estimate;
  double posterior_max = 0.0;  // log of the unnormalized posterior density there
  double fidelity = 0.0;       // set by the caller, who knows the truth
};

struct RefinementOptions {
  double initial_halfwidth_factor = 2.0;  // in units of grid spacing
  double min_halfwidth = 1e-4;            // radians
};

// Grid argmax (ties to the lowest index), then a 5x5 pattern search in the
// tangent plane of the incumbent whose half-width halves every round. Moves
// only on strict improvement, so the result never scores below the grid
// argmax.
inline EstimateResult final_estimate(const Posterior& post,
                                     const RefinementOptions& opts = {}) {
  const auto& lw = post.log_weights();
  int best = 0;
  for (int i = 1; i < static_cast<int>(lw.size()); ++i) {
    if (lw[i] > lw[best]) best = i;
  }
  Vec3 incumbent = post.grid().point(best);
  if (post.record().empty()) {
    return {post.grid().qubit(best), 0.0, 0.0};
  }
  const auto& dirs = post.record_directions();
  double score = log_record_density(incumbent, dirs, post.record());

  for (double h = opts.initial_halfwidth_factor * post.grid().spacing();
       h >= opts.min_halfwidth; h *= 0.5) {
    // Tangent frame at the incumbent.
    const Vec3 helper = std::abs(incumbent.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
    const Vec3 e1 = incumbent.cross(helper).normalized();
    const Vec3 e2 = incumbent.cross(e1);
    Vec3 round_best = incumbent;
    double round_score = score;
    for (int a = -2; a <= 2; ++a) {
      for (int b = -2; b <= 2; ++b) {
        if (a == 0 && b == 0) continue;
        const Vec3 cand =
            (incumbent + std::tan(h * a / 2.0) * e1 + std::tan(h * b / 2.0) * e2)
                .normalized();
        const double s = log_record_density(cand, dirs, post.record());
        if (s > round_score) {
          round_score = s;
          round_best = cand;
        }
      }
    }
    incumbent = round_best;
    score = round_score;
  }

  // Snap the refined point if it moved; otherwise keep the grid qubit exactly.
  const PureQubit q = (incumbent - post.grid().point(best)).norm() == 0.0
                          ? post.grid().qubit(best)
                          : PureQubit::from_bloch(incumbent);
  return {q, score, 0.0};
}

inline double estimation_fidelity(const EstimateResult& est, const PureQubit& truth) {
  return overlap_fidelity(est.estimate, truth);
}

}  // namespace qpurify
