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

#include "qpurify/measurement_engine.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <vector>

#include "qpurify/channel_purify.hpp"
#include "test_support.hpp"

namespace qpurify {
namespace {

using testing::max_abs_diff;
using testing::random_qubit;

constexpr double kPi = std::numbers::pi;

DensityOperator singlet() {
  CVector v = CVector::Zero(4);
  v[0b01] = 1.0 / std::sqrt(2.0);
  v[0b10] = -1.0 / std::sqrt(2.0);
  return DensityOperator::from_pure(StateVector(v));
}

int path_index(const std::vector<Outcome>& path) {
  int idx = 0;
  for (Outcome o : path) idx = 2 * idx + to_int(o);
  return idx;
}

TEST(SeparableEnsemble, OutcomeProbabilityExamples) {
  const PureQubit axis(1.2, 0.7);
  EXPECT_NEAR(SeparableEnsemble(axis, ChannelSpec(1.0), 1).outcome_probability(axis), 1.0, 1e-12);

  RandomStream rng(1);
  for (int i = 0; i < 20; ++i) {
    EXPECT_NEAR(separable_outcome_probability(SeparableEnsemble(axis, ChannelSpec(0.5), 1),
                                              random_qubit(rng)),
                0.5, 1e-12);
  }
  const PureQubit equator(kPi / 2, 0.0);
  const SeparableEnsemble polar(PureQubit(0.0, 0.0), ChannelSpec(0.8), 1);
  EXPECT_NEAR(polar.outcome_probability(equator), 0.5, 1e-12);

  // Same value as the Born rule on the depolarized qubit.
  for (int i = 0; i < 20; ++i) {
    const PureQubit d = random_qubit(rng);
    EXPECT_NEAR(SeparableEnsemble(axis, ChannelSpec(0.7), 1).outcome_probability(d),
                depolarized_qubit(axis, ChannelSpec(0.7)).expectation(bloch_to_state(d)), 1e-12);
  }
}

TEST(SeparableEnsemble, MeasureExamples) {
  const PureQubit axis(0.4, 4.0);
  RandomStream rng(2);
  SeparableEnsemble pure(axis, ChannelSpec(1.0), 1000);
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(measure_separable(pure, axis, rng), Outcome::one);

  SeparableEnsemble big(axis, ChannelSpec(0.75), 100000);
  int ones = 0;
  for (int i = 0; i < 100000; ++i) ones += to_int(big.measure(axis, rng));
  EXPECT_NEAR(ones / 1e5, 0.75, 0.005);

  SeparableEnsemble six(axis, ChannelSpec(0.75), 6);
  for (int expected = 5; expected >= 0; --expected) {
    six.measure(axis, rng);
    EXPECT_EQ(six.remaining(), expected);
  }
  EXPECT_THROW(six.measure(axis, rng), StateError);
  EXPECT_THROW(six.outcome_probability(axis), StateError);
}

TEST(EntangledEnsemble, OutcomeProbabilityExamples) {
  RandomStream rng(3);
  for (double c1 : {0.5, 0.65, 0.8, 1.0}) {
    const PureQubit axis = random_qubit(rng);
    const EntangledEnsemble ens(purified_state(1, ChannelSpec(c1), axis).dense);
    EXPECT_NEAR(entangled_outcome_probability(ens, axis),
                SeparableEnsemble(axis, ChannelSpec(c1), 1).outcome_probability(axis), 1e-12);
  }
  const EntangledEnsemble bell(singlet());
  for (int i = 0; i < 20; ++i) {
    EXPECT_NEAR(bell.outcome_probability(random_qubit(rng)), 0.5, 1e-12);
  }
  const EntangledEnsemble empty{DensityOperator()};
  EXPECT_THROW(empty.outcome_probability(PureQubit()), StateError);
}

TEST(EntangledEnsemble, ComplementaryOutcomesSumToOne) {
  RandomStream rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const DensityOperator rho = testing::random_density(1 + trial % 4, rng);
    const PureQubit d = random_qubit(rng);
    const EntangledEnsemble ens(rho);
    const double p1 = ens.outcome_probability(d);
    const double p0 = apply_single_qubit_projector(rho, 1, d, Outcome::zero).probability;
    EXPECT_NEAR(p0 + p1, 1.0, 1e-12);
  }
}

TEST(EntangledEnsemble, MeasureExamples) {
  RandomStream rng(5);
  const PureQubit axis(2.2, 1.0);
  EntangledEnsemble ens(purified_state(1, ChannelSpec(1.0), axis).dense);
  EXPECT_EQ(measure_entangled(ens, axis, rng), Outcome::one);
  EXPECT_EQ(ens.remaining(), 0);
  EXPECT_EQ(ens.measured_count(), 1);
  EXPECT_THROW(ens.measure(axis, rng), StateError);

  EntangledEnsemble four(purified_state(4, ChannelSpec(0.7), axis).dense);
  for (int n = 1; n <= 4; ++n) {
    four.measure(random_qubit(rng), rng);
    EXPECT_EQ(four.remaining() + four.measured_count(), four.initial_qubits());
    EXPECT_TRUE(is_valid_density(four.current()));
  }
}

TEST(ExhaustiveOutcomeTree, ProductStateFactorizes) {
  RandomStream rng(6);
  const DensityOperator a = testing::random_density(1, rng);
  const DensityOperator b = testing::random_density(1, rng);
  const DensityOperator c = testing::random_density(1, rng);
  const std::vector<PureQubit> dirs{random_qubit(rng), random_qubit(rng), random_qubit(rng)};
  const auto paths = exhaustive_outcome_tree(tensor(tensor(a, b), c), dirs);
  ASSERT_EQ(paths.size(), 8u);
  const DensityOperator* factors[] = {&a, &b, &c};
  double total = 0.0;
  for (const auto& path : paths) {
    double expected = 1.0;
    for (int q = 0; q < 3; ++q) {
      expected *= factors[q]->expectation(outcome_state(dirs[q], path.outcomes[q]));
    }
    EXPECT_NEAR(path.probability, expected, 1e-12);
    total += path.probability;
  }
  EXPECT_NEAR(total, 1.0, 1e-10);
}

TEST(ExhaustiveOutcomeTree, PurifiedPairAlongAxis) {
  const PureQubit axis(0.9, 0.3);
  const auto rho2 = purified_state(2, ChannelSpec(0.75), axis).dense;
  const auto paths = exhaustive_outcome_tree(rho2, {axis, axis});
  const StateVector up = bloch_to_state(axis);
  const double direct = rho2.expectation(tensor(up, up));
  for (const auto& p : paths) {
    if (p.outcomes == std::vector<Outcome>{Outcome::one, Outcome::one}) {
      EXPECT_NEAR(p.probability, direct, 1e-12);
      EXPECT_NEAR(p.probability, 9.0 / 13.0, 1e-12);  // the k = 0 Dicke weight
    }
  }
}

TEST(ExhaustiveOutcomeTree, SingletIsAnticorrelated) {
  const PureQubit d(1.0, 2.0);
  for (const auto& p : exhaustive_outcome_tree(singlet(), {d, d})) {
    const bool same = p.outcomes[0] == p.outcomes[1];
    EXPECT_NEAR(p.probability, same ? 0.0 : 0.5, 1e-12);
  }
}

TEST(ExhaustiveOutcomeTree, Errors) {
  RandomStream rng(7);
  EXPECT_THROW(exhaustive_outcome_tree(testing::random_density(5, rng),
                                       std::vector<PureQubit>(5)),
               CapacityError);
  EXPECT_THROW(exhaustive_outcome_tree(testing::random_density(2, rng), {PureQubit()}),
               DomainError);
}

TEST(ExhaustiveOutcomeTree, PurifiedStatesSumToOne) {
  RandomStream rng(8);
  for (int m = 1; m <= 4; ++m) {
    for (double c1 : {0.5, 0.6, 0.75, 0.9, 1.0}) {
      std::vector<PureQubit> dirs;
      for (int i = 0; i < m; ++i) dirs.push_back(random_qubit(rng));
      double total = 0.0;
      for (const auto& p :
           exhaustive_outcome_tree(purified_state(m, ChannelSpec(c1), random_qubit(rng)).dense, dirs)) {
        total += p.probability;
      }
      EXPECT_NEAR(total, 1.0, 1e-10);
    }
  }
}

// Purified states are permutation symmetric: which qubit is measured first
// does not change the probability or the conditioned remainder.
TEST(EntangledEnsemble, QubitChoiceIsIrrelevantForPurifiedStates) {
  RandomStream rng(9);
  for (int m = 2; m <= 4; ++m) {
    const auto rho = purified_state(m, ChannelSpec(0.7), random_qubit(rng)).dense;
    const PureQubit d = random_qubit(rng);
    for (Outcome o : {Outcome::zero, Outcome::one}) {
      const auto first = apply_single_qubit_projector(rho, 1, d, o);
      for (int idx = 2; idx <= m; ++idx) {
        const auto other = apply_single_qubit_projector(rho, idx, d, o);
        EXPECT_NEAR(first.probability, other.probability, 1e-12);
        EXPECT_LE(max_abs_diff(first.state->matrix(), other.state->matrix()), 1e-10);
      }
    }
  }
}

TEST(EntangledEnsemble, MarginalAlongAxisIsSingleQubitFidelity) {
  RandomStream rng(10);
  for (int m = 1; m <= 6; ++m) {
    for (double c1 : {0.5, 0.55, 0.75, 0.95, 1.0}) {
      const PureQubit axis = random_qubit(rng);
      const EntangledEnsemble ens(purified_state(m, ChannelSpec(c1), axis).dense);
      EXPECT_NEAR(ens.outcome_probability(axis), single_qubit_fidelity(m, ChannelSpec(c1)), 1e-10);
    }
  }
}

// Sampling frequencies of full measurement sequences agree with the
// exhaustive tree within four standard errors.
TEST(EntangledEnsemble, SequentialSamplingMatchesTree) {
  RandomStream setup(11);
  constexpr int kSamples = 100000;
  for (int m = 1; m <= 3; ++m) {
    const auto rho = purified_state(m, ChannelSpec(0.72), random_qubit(setup)).dense;
    std::vector<PureQubit> dirs;
    for (int i = 0; i < m; ++i) dirs.push_back(random_qubit(setup));
    const auto paths = exhaustive_outcome_tree(rho, dirs);

    std::vector<int> counts(1 << m, 0);
    RandomStream rng(1000 + m);
    for (int s = 0; s < kSamples; ++s) {
      EntangledEnsemble ens(rho);
      int idx = 0;
      for (const auto& d : dirs) idx = 2 * idx + to_int(ens.measure(d, rng));
      ++counts[idx];
    }
    for (const auto& p : paths) {
      const double freq = counts[path_index(p.outcomes)] / static_cast<double>(kSamples);
      const double se = std::sqrt(std::max(p.probability * (1 - p.probability), 1e-12) / kSamples);
      EXPECT_LE(std::abs(freq - p.probability), 4 * se) << "M=" << m;
    }
  }
}

// On product inputs the entangled engine and the i.i.d. engine induce the
// same outcome distribution.
TEST(EntangledEnsemble, ProductInputMatchesSeparableSampling) {
  constexpr int kSamples = 100000;
  RandomStream setup(12);
  for (int m = 1; m <= 3; ++m) {
    const PureQubit axis = random_qubit(setup);
    const ChannelSpec ch(0.8);
    DensityOperator product = depolarized_qubit(axis, ch);
    for (int i = 1; i < m; ++i) product = tensor(product, depolarized_qubit(axis, ch));
    std::vector<PureQubit> dirs;
    for (int i = 0; i < m; ++i) dirs.push_back(random_qubit(setup));

    std::vector<int> ent(1 << m, 0), sep(1 << m, 0);
    RandomStream r1(2000 + m), r2(3000 + m);
    for (int s = 0; s < kSamples; ++s) {
      EntangledEnsemble e(product);
      SeparableEnsemble p(axis, ch, m);
      int ie = 0, is = 0;
      for (const auto& d : dirs) {
        ie = 2 * ie + to_int(e.measure(d, r1));
        is = 2 * is + to_int(p.measure(d, r2));
      }
      ++ent[ie];
      ++sep[is];
    }
    for (int k = 0; k < (1 << m); ++k) {
      const double fe = ent[k] / static_cast<double>(kSamples);
      const double fs = sep[k] / static_cast<double>(kSamples);
      const double pooled = 0.5 * (fe + fs);
      const double se = std::sqrt(std::max(2 * pooled * (1 - pooled) / kSamples, 1e-12));
      EXPECT_LE(std::abs(fe - fs), 4 * se) << "M=" << m << " path " << k;
    }
  }
}

}  // namespace
}  // namespace qpurify
