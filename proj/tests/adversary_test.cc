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


#include "dpcausal/adversary.h"

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

Dist CorrelatedTruths() {
  const FiniteDomain data({"pos", "neg", "null"});
  return Dist({"a", "b"}, {data, data}, {{{0, 0}, Q("1/2")}, {{1, 1}, Q("1/2")}});
}

TEST(PosteriorTest, UninformativeKernelKeepsThePrior) {
  const auto kernel = ConstantKernel(2, Digits(3), "0", Digits(2), {Q("1/3"), Q("2/3")});
  const Prior prior(kernel, Dist::Uniform({"a", "b"}, {Digits(3), Digits(3)}));
  for (int o = 0; o < 2; ++o) {
    EXPECT_EQ(Posterior(kernel, prior, o), prior.credence());
    EXPECT_EQ(PosteriorUnderIntervention(kernel, prior, o, 1, 0), prior.credence());
  }
}

TEST(PosteriorTest, HiddenValueIsRuledOut) {
  const auto kernel = HiddenValueKernel();
  const Prior prior(kernel, Dist::Uniform({"a"}, {Digits(3)}));
  const Dist post = Posterior(kernel, prior, 1);
  // Frozen oracle values.
  EXPECT_EQ(post.Weight({0}), Q("1/2"));
  EXPECT_EQ(post.Weight({1}), Q("1/2"));
  EXPECT_EQ(post.Weight({2}), 0);
}

TEST(PosteriorTest, PointMassPriorIsStable) {
  const auto kernel = GeometricCountKernel(2, Q("1/2"));
  const Prior prior(kernel, Dist::PointMass({"a", "b"}, {kernel.data_domain(),
                                                         kernel.data_domain()},
                                            {0, 1}));
  for (int o = 0; o < 3; ++o) EXPECT_EQ(Posterior(kernel, prior, o), prior.credence());
}

TEST(PosteriorTest, ZeroEvidence) {
  const auto kernel = HiddenValueKernel();
  const Prior prior(kernel, Dist::PointMass({"a"}, {Digits(3)}, {2}));
  EXPECT_EQ(KindOf([&] { Posterior(kernel, prior, 1); }), ErrorKind::kZeroEvidence);
  EXPECT_EQ(KindOf([&] { PosteriorUnderIntervention(kernel, prior, 1, 0, 2); }),
            ErrorKind::kZeroEvidence);
  EXPECT_EQ(KindOf([&] { Posterior(kernel, prior, 5); }), ErrorKind::kValueOutOfDomain);
  EXPECT_EQ(KindOf([&] { PosteriorUnderIntervention(kernel, prior, 0, 3, 0); }),
            ErrorKind::kInvalidArgument);
}

TEST(PosteriorTest, CorrelatedPriorStillLeaksThroughTheOtherPoint) {
  const auto kernel = GeometricCountKernel(2, Q("1/2"));
  const Prior prior(kernel, CorrelatedTruths());
  const int two = kernel.output_domain().IndexOf("2");
  // Frozen oracle values.
  EXPECT_EQ(Posterior(kernel, prior, two).Weight({0, 0}), Q("4/5"));
  const Dist swapped = PosteriorUnderIntervention(kernel, prior, two, 0, 2);
  EXPECT_EQ(swapped.Weight({0, 0}), Q("2/3"));
  EXPECT_NE(swapped.Marginal({"D_1"}), prior.credence().Marginal({"D_1"}));
}

TEST(PosteriorTest, LikelihoodFlatInTheCoordinateKeepsItsMarginal) {
  // Output depends on the second point only.
  std::vector<std::vector<Rational>> rows;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) rows.push_back(b == 0 ? std::vector<Rational>{Q("1/4"), Q("3/4")}
                                                      : std::vector<Rational>{Q("1/2"), Q("1/2")});
  const MechanismKernel kernel(2, Digits(3), "0", Digits(2), rows);
  std::mt19937_64 rng(41);
  const Prior prior(kernel, testing::RandomPopulation(rng, kernel, true));
  for (int o = 0; o < 2; ++o) {
    EXPECT_EQ(PosteriorUnderIntervention(kernel, prior, o, 1, 1).Marginal({"D_2"}),
              prior.credence().Marginal({"D_2"}));
  }
}

TEST(SemanticGapTest, Examples) {
  const auto flat = ConstantKernel(1, Digits(3), "0", Digits(2), {Q("1/2"), Q("1/2")});
  EXPECT_EQ(SemanticGap(flat, Prior(flat, Dist::Uniform({"a"}, {Digits(3)})), 0, 0), RB("1/1"));

  // A prior already certain that the point holds the substituted value.
  const auto kernel = GeometricCountKernel(2, Q("1/2"));
  std::map<Assignment, Rational> w{{{2, 0}, Q("1/3")}, {{2, 1}, Q("2/3")}};
  const Prior sure(kernel, Dist({"a", "b"}, {kernel.data_domain(), kernel.data_domain()}, w));
  EXPECT_EQ(SemanticGap(kernel, sure, 0, 2), RB("1/1"));
}

TEST(SemanticGapPropertyTest, BoundedBySquaredClassicRatio) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 40; ++trial) {
    const auto kernel = testing::RandomSmallKernel(rng);
    const RatioBound classic = ComputeClassicEpsilon(kernel).ratio;
    for (int p = 0; p < 3; ++p) {
      const Prior prior(kernel, testing::RandomPopulation(rng, kernel, p != 0));
      for (int i = 0; i < kernel.n(); ++i) {
        const RatioBound gap = SemanticGap(kernel, prior, i, kernel.null_index());
        EXPECT_LE(gap, classic * classic);
        if (classic == RB("1/1")) EXPECT_EQ(gap, RB("1/1"));
      }
    }
  }
}

TEST(SemanticGapPropertyTest, RelabellingOutputsChangesNothing) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    const auto kernel = testing::RandomKernel(rng, 2, 3, 3);
    std::vector<std::vector<Rational>> reversed;
    for (const auto& row : kernel.rows()) reversed.emplace_back(row.rbegin(), row.rend());
    const MechanismKernel relabelled(2, kernel.data_domain(), kernel.null_value(),
                                     FiniteDomain({"x", "y", "z"}), reversed);
    const Prior prior(kernel, testing::RandomPopulation(rng, kernel, true));
    EXPECT_EQ(SemanticGap(kernel, prior, 0, 0), SemanticGap(relabelled, prior, 0, 0));
  }
}

TEST(PosteriorPropertyTest, NoNegativeWeightsAndNoResurrection) {
  std::mt19937_64 rng(44);
  for (int trial = 0; trial < 40; ++trial) {
    const auto kernel = testing::RandomSmallKernel(rng);
    const Prior prior(kernel, testing::RandomPopulation(rng, kernel, false));
    for (int o = 0; o < kernel.output_domain().size(); ++o) {
      try {
        const Dist post = Posterior(kernel, prior, o);
        Rational total = 0;
        for (const auto& [d, w] : post.weights()) {
          EXPECT_GT(w, 0);
          EXPECT_GT(prior.credence().Weight(d), 0);
          total += w;
        }
        EXPECT_EQ(total, 1);
      } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::kZeroEvidence);
      }
    }
  }
}

}  // namespace
}  // namespace dpcausal
