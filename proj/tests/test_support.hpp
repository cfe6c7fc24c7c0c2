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

#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "qpurify/quantum_core.hpp"
#include "qpurify/rng.hpp"

namespace qpurify::testing {

// Random rotation as (unit axis, angle).
struct Rotation {
  Vec3 axis;
  double angle;

  Eigen::Matrix3d matrix() const {
    return Eigen::AngleAxisd(angle, axis).toRotationMatrix();
  }

  // SU(2) element exp(-i angle/2 axis.sigma) in the |1>=(1,0), |0>=(0,1)
  // ordering, where sigma_z = diag(1, -1) matches the Bloch z axis.
  CMatrix unitary() const {
    const Complex i{0.0, 1.0};
    CMatrix sx(2, 2), sy(2, 2), sz(2, 2);
    sx << 0, 1, 1, 0;
    sy << 0, -i, i, 0;
    sz << 1, 0, 0, -1;
    const CMatrix gen = axis.x() * sx + axis.y() * sy + axis.z() * sz;
    return std::cos(angle / 2.0) * CMatrix::Identity(2, 2) - i * std::sin(angle / 2.0) * gen;
  }
};

inline Vec3 random_unit(RandomStream& rng) {
  const double z = 2.0 * rng.uniform() - 1.0;
  const double phi = 2.0 * std::numbers::pi * rng.uniform();
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {r * std::cos(phi), r * std::sin(phi), z};
}

inline PureQubit random_qubit(RandomStream& rng) {
  return PureQubit::from_bloch(random_unit(rng));
}

inline Rotation random_rotation(RandomStream& rng) {
  return {random_unit(rng), 2.0 * std::numbers::pi * rng.uniform()};
}

inline CMatrix kron_power(const CMatrix& u, int m) {
  CMatrix out = CMatrix::Ones(1, 1);
  for (int k = 0; k < m; ++k) {
    CMatrix next(out.rows() * u.rows(), out.cols() * u.cols());
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
      for (Eigen::Index j = 0; j < out.cols(); ++j) {
        next.block(i * u.rows(), j * u.cols(), u.rows(), u.cols()) = out(i, j) * u;
      }
    }
    out = std::move(next);
  }
  return out;
}

// Random mixed state on m qubits: A A^dagger / Tr with Gaussian A.
inline DensityOperator random_density(int m, RandomStream& rng) {
  std::normal_distribution<double> gauss;
  const Eigen::Index dim = Eigen::Index{1} << m;
  CMatrix a(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) a(i, j) = {gauss(rng), gauss(rng)};
  }
  CMatrix rho = a * a.adjoint();
  rho /= rho.trace().real();
  return DensityOperator(m, rho);
}

inline double max_abs_diff(const CMatrix& a, const CMatrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

// Projector |psi><psi| for phase-insensitive comparisons.
inline CMatrix projector(const StateVector& psi) {
  return psi.amplitudes() * psi.amplitudes().adjoint();
}

}  // namespace qpurify::testing
