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

// Reference construction of the purified state by direct integration over the
// Bloch sphere. Slow; used to validate the closed-form Dicke-diagonal path in
// channel_purify.hpp and never on the simulation hot path.

#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "qpurify/channel_purify.hpp"
#include "qpurify/errors.hpp"
#include "qpurify/quantum_core.hpp"

namespace qpurify {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre nodes and weights on [-1, 1] via Newton iteration on P_n.
inline QuadratureRule gauss_legendre(int n) {
  QuadratureRule rule{std::vector<double>(n), std::vector<double>(n)};
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.weights[i] = w;
    rule.nodes[n - 1 - i] = x;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

// rho_M = (c1 - c0)(M + 1) / (c1^{M+1} - c0^{M+1})
//         * Int dOmega/4pi  n(theta)^M (|Psi(theta, phi)><Psi(theta, phi)|)^{(x)M}
// with n(theta) = c1 cos^2(theta/2) + c0 sin^2(theta/2) and
// |Psi> = [sqrt(c1) cos(theta/2)|1>_axis + sqrt(c0) sin(theta/2) e^{i phi}|0>_axis]
//         / sqrt(n(theta)).
// Gauss-Legendre in cos(theta); trapezoid in phi with at least 4M+4 points so
// every azimuthal Fourier mode of the integrand integrates exactly.
inline DensityOperator purified_state_oracle(int m, const ChannelSpec& channel,
                                             const PureQubit& axis,
                                             int quadrature_points = 64,
                                             int max_qubits = kDefaultMaxQubits) {
  if (m < 1) throw DomainError("purified_state_oracle: M must be >= 1");
  if (m > max_qubits) {
    throw CapacityError("purified_state_oracle: M exceeds the limit of " +
                        std::to_string(max_qubits));
  }
  if (quadrature_points < 64) {
    throw DomainError("purified_state_oracle: need at least 64 quadrature points");
  }
  const double c1 = channel.c1();
  const double c0 = channel.c0();
  const CVector up = bloch_to_state(axis).amplitudes();
  const CVector down = orthogonal_state(axis).amplitudes();

  // (c1^{M+1} - c0^{M+1}) / (c1 - c0) as a geometric sum.
  double geometric = 0.0;
  for (double t : detail::geometric_terms(m, channel)) geometric += t;
  const double prefactor = (m + 1) / geometric;

  const QuadratureRule gl = gauss_legendre(quadrature_points);
  const int n_phi = 4 * m + 4;
  const Eigen::Index dim = Eigen::Index{1} << m;
  CMatrix acc = CMatrix::Zero(dim, dim);

  for (std::size_t it = 0; it < gl.nodes.size(); ++it) {
    const double cos_theta = gl.nodes[it];
    const double half_cos = std::sqrt(std::max(0.0, 0.5 * (1.0 + cos_theta)));
    const double half_sin = std::sqrt(std::max(0.0, 0.5 * (1.0 - cos_theta)));
    const double n_theta = c1 * half_cos * half_cos + c0 * half_sin * half_sin;
    if (n_theta <= 0.0) continue;
    const double n_pow = std::pow(n_theta, m);
    // dOmega / 4pi = d(cos theta)/2 * dphi/2pi
    const double w_theta = 0.5 * gl.weights[it];
    for (int ip = 0; ip < n_phi; ++ip) {
      const double phi = 2.0 * std::numbers::pi * ip / n_phi;
      const CVector psi =
          (std::sqrt(c1) * half_cos / std::sqrt(n_theta)) * up +
          (std::sqrt(c0) * half_sin / std::sqrt(n_theta)) * std::polar(1.0, phi) * down;
      CVector power = CVector::Ones(1);
      for (int q = 0; q < m; ++q) {
        CVector next(power.size() * 2);
        for (Eigen::Index i = 0; i < power.size(); ++i) {
          next[2 * i] = power[i] * psi[0];
          next[2 * i + 1] = power[i] * psi[1];
        }
        power = std::move(next);
      }
      acc.noalias() += (w_theta * n_pow / n_phi) * (power * power.adjoint());
    }
  }
  return DensityOperator(m, prefactor * acc);
}

}  // namespace qpurify
