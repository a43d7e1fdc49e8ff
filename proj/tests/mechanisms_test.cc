// Copyright 2026 The dpcausal Authors
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


#include "dpcausal/mechanisms.h"

#include <gtest/gtest.h>

#include <random>

#include "dpcausal/error.h"
#include "test_support.h"

namespace dpcausal {
namespace {

using ::dpcausal::testing::Digits;
using ::dpcausal::testing::Q;
using ::dpcausal::testing::RB;

template <typename Fn>
ErrorKind KindOf(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::kInvalidArgument;
}

TEST(RandomizedResponseTest, SingleRespondentRows) {
  const auto k = RandomizedResponseKernel(1, Q("2/3"));
  EXPECT_EQ(k.output_domain().values(), (std::vector<std::string>{"pos", "neg"}));
  EXPECT_EQ(k.Row({0}), (std::vector<Rational>{Q("2/3"), Q("1/3")}));
  EXPECT_EQ(k.Row({1}), (std::vector<Rational>{Q("1/3"), Q("2/3")}));
  EXPECT_EQ(k.Row({2}), (std::vector<Rational>{Q("1/2"), Q("1/2")}));
  EXPECT_EQ(ComputeClassicEpsilon(k).ratio, RB("2/1"));
}

TEST(RandomizedResponseTest, ProductRule) {
  const auto k = RandomizedResponseKernel(2, Q("2/3"));
  const int pos_neg = *k.output_domain().Find("(pos,neg)");
  EXPECT_EQ(k.Probability({0, 0}, pos_neg), Q("2/9"));
}

TEST(RandomizedResponseTest, RatioIsBiasOddsForEveryN) {
  for (const char* q : {"2/3", "3/4", "5/9"}) {
    const Rational bias = Q(q);
    const RatioBound odds(Rational(bias / (1 - bias)));
    for (int n = 1; n <= 3; ++n) {
      EXPECT_EQ(ComputeClassicEpsilon(RandomizedResponseKernel(n, bias)).ratio, odds)
          << q << " n=" << n;
    }
  }
}

TEST(RandomizedResponseTest, BiasGuard) {
  EXPECT_EQ(KindOf([] { RandomizedResponseKernel(1, Q("1/2")); }),
            ErrorKind::kBiasOutOfRange);
  EXPECT_EQ(KindOf([] { RandomizedResponseKernel(1, Q("1/1")); }),
            ErrorKind::kBiasOutOfRange);
  EXPECT_EQ(KindOf([] { RandomizedResponseKernel(1, Q("1/3")); }),
            ErrorKind::kBiasOutOfRange);
}

TEST(GeometricCountTest, RatioEqualsInverseDecay) {
  for (int n = 1; n <= 4; ++n) {
    EXPECT_EQ(ComputeClassicEpsilon(GeometricCountKernel(n, Q("1/2"))).ratio, RB("2/1"));
  }
  EXPECT_EQ(ComputeClassicEpsilon(GeometricCountKernel(3, Q("1/3"))).ratio, RB("3/1"));
}

TEST(GeometricCountTest, EqualCountsShareRows) {
  const auto k = GeometricCountKernel(3, Q("1/2"));
  // neg and null both count zero.
  EXPECT_EQ(k.Row({0, 1, 2}), k.Row({2, 2, 0}));
  EXPECT_EQ(k.Row({1, 1, 1}), k.Row({2, 1, 2}));
  EXPECT_NE(k.Row({0, 0, 1}), k.Row({0, 1, 1}));
}

TEST(GeometricCountTest, RatioGuard) {
  EXPECT_EQ(KindOf([] { GeometricCountKernel(2, Q("1/1")); }), ErrorKind::kRatioOutOfRange);
  EXPECT_EQ(KindOf([] { GeometricCountKernel(2, Q("0/1")); }), ErrorKind::kRatioOutOfRange);
  EXPECT_EQ(KindOf([] { GeometricCountKernel(0, Q("1/2")); }), ErrorKind::kInvalidArgument);
}

TEST(HiddenValueTest, JointKernelRows) {
  const auto k = JointHiddenValueKernel();
  EXPECT_EQ(k.Probability({2, 2}, 1), 0);
  EXPECT_EQ(k.Probability({2, 2}, 0), 1);
  EXPECT_EQ(k.Row({0, 2}), (std::vector<Rational>{Q("1/2"), Q("1/2")}));
  const auto classic = ComputeClassicEpsilon(k);
  EXPECT_TRUE(classic.ratio.is_infinite());
  ASSERT_TRUE(classic.witness.has_value());
  EXPECT_EQ(classic.witness->output, 1);
  // The witness moves a database onto (2,2).
  EXPECT_EQ(WithCoordinate(classic.witness->database, classic.witness->coordinate,
                           classic.witness->alternative),
            (Database{2, 2}));
}

TEST(HiddenValueTest, SingleKernelRows) {
  const auto k = HiddenValueKernel();
  EXPECT_EQ(k.Row({1}), (std::vector<Rational>{Q("1/2"), Q("1/2")}));
  EXPECT_EQ(k.Row({2}), (std::vector<Rational>{1, 0}));
  const auto classic = ComputeClassicEpsilon(k);
  EXPECT_TRUE(classic.ratio.is_infinite());
  EXPECT_EQ(classic.witness->output, 1);
  EXPECT_EQ(classic.witness->alternative, 2);
}

TEST(ClassicEpsilonTest, ConstantKernelHasRatioOneAndNoWitness) {
  const auto k = ConstantKernel(2, Digits(3), "0", Digits(2), {Q("1/3"), Q("2/3")});
  const auto classic = ComputeClassicEpsilon(k);
  EXPECT_EQ(classic.ratio, RB("1/1"));
  EXPECT_FALSE(classic.witness.has_value());
}

TEST(KernelTest, ConstructorGuards) {
  EXPECT_EQ(KindOf([] {
              MechanismKernel(1, Digits(2), "x", Digits(2), {{1, 0}, {0, 1}});
            }),
            ErrorKind::kValueOutOfDomain);
  EXPECT_EQ(KindOf([] { MechanismKernel(1, Digits(2), "0", Digits(2), {{1, 0}}); }),
            ErrorKind::kDomainMismatch);
  EXPECT_EQ(KindOf([] {
              MechanismKernel(1, Digits(2), "0", Digits(2), {{1, 0}, {Q("1/2"), Q("49/100")}});
            }),
            ErrorKind::kInvalidKernel);
}

TEST(KernelTest, DatabaseIndexingIsLexicographic) {
  const auto k = GeometricCountKernel(2, Q("1/2"));
  EXPECT_EQ(k.DatabaseAt(0), (Database{0, 0}));
  EXPECT_EQ(k.DatabaseAt(1), (Database{0, 1}));
  EXPECT_EQ(k.DatabaseAt(3), (Database{1, 0}));
  for (int idx = 0; idx < k.num_databases(); ++idx) {
    EXPECT_EQ(k.IndexOf(k.DatabaseAt(idx)), idx);
  }
  EXPECT_EQ(k.DatabaseLabel({0, 2}), "(pos,null)");
}

TEST(CanonicalModelTest, IndependentAttributesGiveProductPoints) {
  const auto k = GeometricCountKernel(2, Q("1/2"));
  const Dist pop({"a", "b"}, {k.data_domain(), k.data_domain()},
                 {{{0, 0}, Q("1/6")}, {{0, 1}, Q("1/6")}, {{1, 0}, Q("1/3")}, {{1, 1}, Q("1/3")}});
  const Dist points = Lift(BuildCanonicalModel(k, pop)).Marginal({"D_1", "D_2"});
  for (const auto& [d, w] : points.weights()) {
    EXPECT_EQ(w, points.Marginal({"D_1"}).Weight({d[0]}) *
                     points.Marginal({"D_2"}).Weight({d[1]}));
  }
}

TEST(CanonicalModelTest, PointMassGivesTheKernelRow) {
  const auto k = RandomizedResponseKernel(2, Q("3/4"));
  const Database d{1, 2};
  const auto psem = BuildCanonicalModel(
      k, Dist::PointMass({"a", "b"}, {k.data_domain(), k.data_domain()}, d));
  const Dist o = Lift(psem).Marginal({"O"});
  for (int out = 0; out < k.output_domain().size(); ++out) {
    EXPECT_EQ(o.Weight({out}), k.Probability(d, out));
  }
}

TEST(CanonicalModelTest, EquationGuards) {
  const auto k = GeometricCountKernel(2, Q("1/2"));
  EXPECT_EQ(KindOf([&] { BuildCanonicalSem(k, {{"O", {}, {}}}); }),
            ErrorKind::kInvalidArgument);
  EXPECT_EQ(KindOf([&] { BuildCanonicalSem(k, {{"R_2", {"D_1"}, {}}}); }),
            ErrorKind::kInvalidArgument);
  const std::vector<std::vector<Rational>> copy{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  EXPECT_EQ(KindOf([&] {
              BuildCanonicalSem(k, {{"R_1", {"R_2"}, copy}, {"R_2", {"R_1"}, copy}});
            }),
            ErrorKind::kCyclicModel);
  // An input manipulation: D_2 always reports null.
  const Sem manipulated =
      BuildCanonicalSem(k, {{"D_2", {}, {{Rational(0), Rational(0), Rational(1)}}}});
  EXPECT_TRUE(manipulated.EquationFor(manipulated.IndexOf("D_2"))->parents.empty());
}

// Properties.

TEST(ClassicPropertyTest, ReverseComparisonsStayUnderTheBound) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 60; ++trial) {
    const auto k = testing::RandomSmallKernel(rng);
    const auto classic = ComputeClassicEpsilon(k);
    if (!classic.witness) continue;
    const auto& w = *classic.witness;
    const Database other = WithCoordinate(w.database, w.coordinate, w.alternative);
    const auto reverse =
        RatioBound::Of(k.Probability(other, w.output), k.Probability(w.database, w.output));
    if (reverse) EXPECT_LE(*reverse, classic.ratio);
  }
}

TEST(ClassicPropertyTest, RatioOneIffAllRowsEqual) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 60; ++trial) {
    auto k = testing::RandomSmallKernel(rng);
    if (trial % 3 == 0) {
      k = ConstantKernel(k.n(), k.data_domain(), k.null_value(), k.output_domain(),
                         k.rows()[0]);
    }
    bool all_equal = true;
    for (const auto& row : k.rows()) all_equal = all_equal && row == k.rows()[0];
    EXPECT_EQ(ComputeClassicEpsilon(k).ratio == RB("1/1"), all_equal);
  }
}

}  // namespace
}  // namespace dpcausal
