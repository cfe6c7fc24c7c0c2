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

// Dense qubit primitives: Bloch-sphere points, state vectors, density
// operators, tensor products, partial trace, single-qubit projective
// contraction and the Dicke basis of the symmetric subspace.
//
// Conventions used throughout the library:
//   * computational ordering |1> = (1, 0), |0> = (0, 1);
//   * in a multi-qubit index, qubit 1 is the most significant bit;
//   * states that differ by a global phase are compared via projectors.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qpurify/errors.hpp"

namespace qpurify {

using Complex = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr int kDefaultMaxQubits = 12;

// Branches whose Born probability falls below this are treated as unreachable.
inline constexpr double kProbabilityFloor = 1e-14;

enum class Outcome : std::uint8_t { zero = 0, one = 1 };

inline constexpr Outcome flip(Outcome o) {
  return o == Outcome::one ? Outcome::zero : Outcome::one;
}

inline constexpr int to_int(Outcome o) { return static_cast<int>(o); }

// A pure qubit state, i.e. a point on the Bloch sphere. theta in [0, pi],
// phi in [0, 2 pi).
class PureQubit {
 public:
  PureQubit() = default;

  PureQubit(double theta, double phi) : theta_(theta), phi_(phi) {
    if (!(theta >= 0.0 && theta <= std::numbers::pi)) {
      throw DomainError("PureQubit: theta must lie in [0, pi], got " +
                        std::to_string(theta));
    }
    if (!(phi >= 0.0 && phi < 2.0 * std::numbers::pi)) {
      throw DomainError("PureQubit: phi must lie in [0, 2pi), got " +
                        std::to_string(phi));
    }
  }

  // Any nonzero vector; only its direction is used.
  static PureQubit from_bloch(const Vec3& v) {
    const double norm = v.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      throw DomainError("PureQubit::from_bloch: zero or non-finite vector");
    }
    const Vec3 u = v / norm;
    const double theta = std::acos(std::clamp(u.z(), -1.0, 1.0));
    double phi = std::atan2(u.y(), u.x());
    if (phi < 0.0) phi += 2.0 * std::numbers::pi;
    if (phi >= 2.0 * std::numbers::pi) phi = 0.0;
    return PureQubit(theta, phi);
  }

  double theta() const { return theta_; }
  double phi() const { return phi_; }

  Vec3 bloch() const {
    const double s = std::sin(theta_);
    return {s * std::cos(phi_), s * std::sin(phi_), std::cos(theta_)};
  }

 private:
  double theta_ = 0.0;
  double phi_ = 0.0;
};

// Normalized amplitude vector on m qubits (dimension 2^m).
class StateVector {
 public:
  StateVector() : amplitudes_(CVector::Ones(1)) {}

  explicit StateVector(CVector amplitudes) : amplitudes_(std::move(amplitudes)) {
    const auto dim = static_cast<std::uint64_t>(amplitudes_.size());
    if (dim == 0 || !std::has_single_bit(dim)) {
      throw DomainError("StateVector: dimension must be a power of two");
    }
  }

  int num_qubits() const {
    return std::countr_zero(static_cast<std::uint64_t>(amplitudes_.size()));
  }
  Eigen::Index dim() const { return amplitudes_.size(); }
  const CVector& amplitudes() const { return amplitudes_; }
  Complex operator[](Eigen::Index i) const { return amplitudes_[i]; }

  // <this|other>
  Complex inner(const StateVector& other) const {
    return amplitudes_.dot(other.amplitudes_);
  }

 private:
  CVector amplitudes_;
};

// Hermitian, positive semidefinite, unit-trace operator on m qubits. A
// zero-qubit operator is the 1x1 matrix [1] (nothing left to measure).
class DensityOperator {
 public:
  DensityOperator() : matrix_(CMatrix::Ones(1, 1)) {}

  DensityOperator(int num_qubits, CMatrix matrix)
      : num_qubits_(num_qubits), matrix_(std::move(matrix)) {
    const Eigen::Index dim = Eigen::Index{1} << num_qubits;
    if (num_qubits < 0 || matrix_.rows() != dim || matrix_.cols() != dim) {
      throw DomainError("DensityOperator: matrix shape does not match 2^m");
    }
  }

  static DensityOperator from_pure(const StateVector& psi) {
    return DensityOperator(psi.num_qubits(),
                           psi.amplitudes() * psi.amplitudes().adjoint());
  }

  int num_qubits() const { return num_qubits_; }
  Eigen::Index dim() const { return matrix_.rows(); }
  const CMatrix& matrix() const { return matrix_; }
  Complex trace() const { return matrix_.trace(); }

  // <psi|rho|psi>, real part.
  double expectation(const StateVector& psi) const {
    return (psi.amplitudes().adjoint() * matrix_ * psi.amplitudes())(0, 0).real();
  }

 private:
  int num_qubits_ = 0;
  CMatrix matrix_;
};

struct DensityDiagnostics {
  double hermiticity_error;  // max |rho_ij - conj(rho_ji)|
  double trace_error;        // |Tr rho - 1|
  double min_eigenvalue;
};

inline DensityDiagnostics diagnose(const DensityOperator& rho) {
  const CMatrix& m = rho.matrix();
  const double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
  const double tr = std::abs(rho.trace() - Complex{1.0, 0.0});
  const CMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym, Eigen::EigenvaluesOnly);
  return {herm, tr, solver.eigenvalues().minCoeff()};
}

inline bool is_valid_density(const DensityOperator& rho) {
  const auto d = diagnose(rho);
  return d.hermiticity_error <= 1e-10 && d.trace_error <= 1e-10 &&
         d.min_eigenvalue >= -1e-9;
}

// cos(theta/2)|1> + sin(theta/2) e^{i phi}|0>
inline StateVector bloch_to_state(const PureQubit& q) {
  CVector v(2);
  v[0] = std::cos(q.theta() / 2.0);
  v[1] = std::sin(q.theta() / 2.0) * std::polar(1.0, q.phi());
  return StateVector(std::move(v));
}

// cos(theta/2)|0> - sin(theta/2) e^{-i phi}|1>
inline StateVector orthogonal_state(const PureQubit& q) {
  CVector v(2);
  v[0] = -std::sin(q.theta() / 2.0) * std::polar(1.0, -q.phi());
  v[1] = std::cos(q.theta() / 2.0);
  return StateVector(std::move(v));
}

// Outcome one selects the direction state, outcome zero its orthogonal state.
inline StateVector outcome_state(const PureQubit& direction, Outcome outcome) {
  return outcome == Outcome::one ? bloch_to_state(direction)
                                 : orthogonal_state(direction);
}

inline StateVector tensor(const StateVector& a, const StateVector& b) {
  CVector out(a.dim() * b.dim());
  for (Eigen::Index i = 0; i < a.dim(); ++i) {
    out.segment(i * b.dim(), b.dim()) = a[i] * b.amplitudes();
  }
  return StateVector(std::move(out));
}

inline DensityOperator tensor(const DensityOperator& a, const DensityOperator& b,
                              int max_qubits = kDefaultMaxQubits) {
  const int total = a.num_qubits() + b.num_qubits();
  if (total > max_qubits) {
    throw CapacityError("tensor: " + std::to_string(total) +
                        " qubits exceeds the limit of " +
                        std::to_string(max_qubits));
  }
  const Eigen::Index db = b.dim();
  CMatrix out(a.dim() * db, a.dim() * db);
  for (Eigen::Index i = 0; i < a.dim(); ++i) {
    for (Eigen::Index j = 0; j < a.dim(); ++j) {
      out.block(i * db, j * db, db, db) = a.matrix()(i, j) * b.matrix();
    }
  }
  return DensityOperator(total, std::move(out));
}

// Reduced operator of qubit 1 (traces out qubits 2..m).
inline DensityOperator partial_trace_to_first(const DensityOperator& rho) {
  if (rho.num_qubits() < 1) {
    throw DomainError("partial_trace_to_first: operator has no qubits");
  }
  const Eigen::Index half = rho.dim() / 2;
  CMatrix out(2, 2);
  for (Eigen::Index a = 0; a < 2; ++a) {
    for (Eigen::Index b = 0; b < 2; ++b) {
      out(a, b) = rho.matrix().block(a * half, b * half, half, half).trace();
    }
  }
  return DensityOperator(1, std::move(out));
}

struct ProjectionResult {
  double probability = 0.0;
  // Empty when probability < kProbabilityFloor; the branch must not be used.
  std::optional<DensityOperator> state;

  bool valid() const { return state.has_value(); }
};

// Measures qubit `qubit_index` (1-based) of rho along `direction` and returns
// the Born probability of `outcome` together with the normalized operator on
// the remaining qubits.
inline ProjectionResult apply_single_qubit_projector(const DensityOperator& rho,
                                                     int qubit_index,
                                                     const PureQubit& direction,
                                                     Outcome outcome) {
  const int m = rho.num_qubits();
  if (qubit_index < 1 || qubit_index > m) {
    throw DomainError("apply_single_qubit_projector: qubit index " +
                      std::to_string(qubit_index) + " outside [1, " +
                      std::to_string(m) + "]");
  }
  const StateVector v = outcome_state(direction, outcome);
  const int shift = m - qubit_index;  // bit position of the measured qubit
  const Eigen::Index low_mask = (Eigen::Index{1} << shift) - 1;
  const Eigen::Index rest = rho.dim() / 2;
  auto expand = [&](Eigen::Index r, Eigen::Index bit) {
    return ((r & ~low_mask) << 1) | (bit << shift) | (r & low_mask);
  };

  CMatrix out = CMatrix::Zero(rest, rest);
  const CMatrix& in = rho.matrix();
  for (Eigen::Index a = 0; a < 2; ++a) {
    for (Eigen::Index b = 0; b < 2; ++b) {
      const Complex coeff = std::conj(v[a]) * v[b];
      if (coeff == Complex{}) continue;
      for (Eigen::Index j = 0; j < rest; ++j) {
        const Eigen::Index col = expand(j, b);
        for (Eigen::Index i = 0; i < rest; ++i) {
          out(i, j) += coeff * in(expand(i, a), col);
        }
      }
    }
  }

  ProjectionResult result;
  result.probability = std::clamp(out.trace().real(), 0.0, 1.0);
  if (result.probability >= kProbabilityFloor) {
    out /= out.trace().real();
    result.state.emplace(m - 1, std::move(out));
  }
  return result;
}

// Symmetric basis about `axis`: vector k is the normalized sum over all
// placements of k qubits in orthogonal_state(axis) and m-k in
// bloch_to_state(axis).
struct DickeBasis {
  int m = 0;
  PureQubit axis;
  std::vector<StateVector> vectors;
};

inline DickeBasis dicke_basis(int m, const PureQubit& axis,
                              int max_qubits = kDefaultMaxQubits) {
  if (m < 0) throw DomainError("dicke_basis: negative qubit count");
  if (m > max_qubits) {
    throw CapacityError("dicke_basis: " + std::to_string(m) +
                        " qubits exceeds the limit of " +
                        std::to_string(max_qubits));
  }
  const CVector up = bloch_to_state(axis).amplitudes();
  const CVector down = orthogonal_state(axis).amplitudes();
  const Eigen::Index dim = Eigen::Index{1} << m;

  std::vector<CVector> sums(m + 1, CVector::Zero(dim));
  for (std::uint64_t mask = 0; mask < static_cast<std::uint64_t>(dim); ++mask) {
    // Bit (m-1-j) of mask set means qubit j+1 sits in the orthogonal state.
    // Amplitude of basis index x is the product of per-qubit factors.
    CVector& target = sums[std::popcount(mask)];
    for (Eigen::Index x = 0; x < dim; ++x) {
      Complex amp{1.0, 0.0};
      for (int j = 0; j < m; ++j) {
        const int bit = m - 1 - j;
        const Eigen::Index xi = (x >> bit) & 1;
        amp *= ((mask >> bit) & 1) ? down[xi] : up[xi];
      }
      target[x] += amp;
    }
  }

  DickeBasis basis{m, axis, {}};
  basis.vectors.reserve(m + 1);
  for (auto& s : sums) {
    s.normalize();
    basis.vectors.emplace_back(std::move(s));
  }
  return basis;
}

// |<a|b>|^2 = (1 + a.b) / 2 in Bloch coordinates.
inline double overlap_fidelity(const PureQubit& a, const PureQubit& b) {
  return std::clamp(0.5 * (1.0 + a.bloch().dot(b.bloch())), 0.0, 1.0);
}

}  // namespace qpurify
