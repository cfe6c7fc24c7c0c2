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

// Depolarizing channel and the ensemble purification protocol.
//
// N noisy copies c1|1><1| + c0|0><0| (about an unknown axis) are projected
// onto M purified, permutation-symmetric qubits with probability p_M; the
// other N-M qubits end up in singlets and carry no information, so only the
// count N-M is kept.
//
// Every ratio of the form (c1^{k} - c0^{k}) / (c1 - c0) is evaluated as the
// finite geometric sum sum_j c1^{k-1-j} c0^j, which stays well defined at the
// fully mixed point c1 = c0 = 1/2.

#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qpurify/errors.hpp"
#include "qpurify/quantum_core.hpp"

namespace qpurify {

class ChannelSpec {
 public:
  explicit ChannelSpec(double c1 = 1.0) : c1_(c1) {
    if (!(c1 >= 0.5 && c1 <= 1.0)) {
      throw DomainError("ChannelSpec: c1 must lie in [1/2, 1], got " +
                        std::to_string(c1));
    }
  }

  double c1() const { return c1_; }
  double c0() const { return 1.0 - c1_; }

 private:
  double c1_;
};

namespace detail {

// Terms c1^{m-k} c0^k for k = 0..m.
inline std::vector<double> geometric_terms(int m, const ChannelSpec& ch) {
  std::vector<double> terms(m + 1);
  const double c1 = ch.c1();
  const double c0 = ch.c0();
  // Build from both ends so that c0 = 0 yields exact zeros.
  for (int k = 0; k <= m; ++k) {
    double t = 1.0;
    for (int i = 0; i < m - k; ++i) t *= c1;
    for (int i = 0; i < k; ++i) t *= c0;
    terms[k] = t;
  }
  return terms;
}

inline double sum(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

// C(n, k) with C(n, k) = 0 for k < 0 or k > n.
inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) {
    r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return std::round(r);
}

}  // namespace detail

inline DensityOperator depolarized_qubit(const PureQubit& axis,
                                         const ChannelSpec& channel) {
  const CVector up = bloch_to_state(axis).amplitudes();
  const CVector down = orthogonal_state(axis).amplitudes();
  CMatrix m = channel.c1() * (up * up.adjoint()) +
              channel.c0() * (down * down.adjoint());
  return DensityOperator(1, std::move(m));
}

struct PurificationDistribution {
  int n_qubits = 0;
  ChannelSpec channel;
  std::map<int, double> probs;  // even M in {0, 2, ..., N} -> p_M
};

inline PurificationDistribution purification_distribution(
    int n, const ChannelSpec& channel, int max_qubits = kDefaultMaxQubits) {
  if (n < 2 || n % 2 != 0) {
    throw DomainError("purification_distribution: N must be even and >= 2, got " +
                      std::to_string(n));
  }
  if (n > max_qubits) {
    throw CapacityError("purification_distribution: N exceeds the limit of " +
                        std::to_string(max_qubits));
  }
  const double c0c1 = channel.c0() * channel.c1();
  PurificationDistribution dist{n, channel, {}};
  for (int m = 0; m <= n; m += 2) {
    const int pairs = (n - m) / 2;
    const double multiplicity =
        detail::binomial(n, pairs) - detail::binomial(n, pairs - 1);
    double pair_factor = 1.0;
    for (int i = 0; i < pairs; ++i) pair_factor *= c0c1;
    dist.probs[m] =
        multiplicity * pair_factor * detail::sum(detail::geometric_terms(m, channel));
  }
  return dist;
}

// Output of the protocol for one value of M. The dense operator is
// sum_k w_k |D_k><D_k| in the Dicke basis about the channel axis.
struct PurifiedState {
  int m = 0;
  PureQubit axis;
  std::vector<double> dicke_weights;
  DensityOperator dense;
};

// Dicke-sector weights of rho_M: w_k proportional to c1^{M-k} c0^k. The
// azimuthal integral over the Bloch sphere removes every cross term between
// sectors, leaving this diagonal form.
inline std::vector<double> purified_dicke_weights(int m, const ChannelSpec& channel) {
  if (m < 0) throw DomainError("purified_dicke_weights: negative M");
  auto w = detail::geometric_terms(m, channel);
  const double total = detail::sum(w);
  for (double& x : w) x /= total;
  return w;
}

inline PurifiedState purified_state(int m, const ChannelSpec& channel,
                                    const PureQubit& axis,
                                    int max_qubits = kDefaultMaxQubits) {
  if (m < 0) throw DomainError("purified_state: negative M");
  PurifiedState out{m, axis, purified_dicke_weights(m, channel), DensityOperator()};
  if (m == 0) return out;

  const DickeBasis basis = dicke_basis(m, axis, max_qubits);
  const Eigen::Index dim = Eigen::Index{1} << m;
  CMatrix rho = CMatrix::Zero(dim, dim);
  for (int k = 0; k <= m; ++k) {
    if (out.dicke_weights[k] == 0.0) continue;
    const CVector& d = basis.vectors[k].amplitudes();
    rho.noalias() += out.dicke_weights[k] * (d * d.adjoint());
  }
  out.dense = DensityOperator(m, std::move(rho));
  return out;
}

// Probability that one purified qubit is found in the axis state. A qubit of
// Dicke sector k is in |1> along the axis with probability (M-k)/M.
inline double single_qubit_fidelity(int m, const ChannelSpec& channel) {
  if (m < 0) throw DomainError("single_qubit_fidelity: negative M");
  if (m == 0) return 0.5;
  const auto terms = detail::geometric_terms(m, channel);
  double num = 0.0;
  for (int k = 0; k <= m; ++k) num += static_cast<double>(m - k) * terms[k];
  return num / (static_cast<double>(m) * detail::sum(terms));
}

inline double mean_purified_fidelity(int n, const ChannelSpec& channel) {
  const auto dist = purification_distribution(n, channel);
  double mean = 0.0;
  for (const auto& [m, p] : dist.probs) mean += p * single_qubit_fidelity(m, channel);
  return mean;
}

}  // namespace qpurify
