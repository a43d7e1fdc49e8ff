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

#include <map>

#include "dpcausal/error.h"

namespace dpcausal {
namespace {

// Bayes update with likelihood A(substitute(d))[o].
template <typename Substitute>
std::optional<Dist> Update(const MechanismKernel& kernel, const Prior& prior,
                           int output, Substitute substitute) {
  if (output < 0 || output >= kernel.output_domain().size()) {
    throw Error(ErrorKind::kValueOutOfDomain, "output index out of range");
  }
  const Dist& credence = prior.credence();
  Rational evidence = 0;
  std::map<Assignment, Rational> joint;
  for (const auto& [d, w] : credence.weights()) {
    const Rational p = w * kernel.Probability(substitute(d), output);
    if (sgn(p) == 0) continue;
    evidence += p;
    joint.emplace(d, p);
  }
  if (sgn(evidence) == 0) return std::nullopt;
  for (auto& [d, p] : joint) p /= evidence;
  return Dist(credence.names(), credence.domains(), std::move(joint));
}

Dist OrThrow(std::optional<Dist> posterior, const MechanismKernel& kernel, int output) {
  if (!posterior) {
    throw Error(ErrorKind::kZeroEvidence,
                "output \"" + kernel.output_domain().value(output) +
                    "\" has probability 0 under the prior");
  }
  return std::move(*posterior);
}

void CheckCoordinate(const MechanismKernel& kernel, int coordinate, int alternative) {
  if (coordinate < 0 || coordinate >= kernel.n()) {
    throw Error(ErrorKind::kInvalidArgument, "coordinate out of range");
  }
  if (alternative < 0 || alternative >= kernel.data_domain().size()) {
    throw Error(ErrorKind::kValueOutOfDomain, "alternative value out of range");
  }
}

}  // namespace

Prior::Prior(const MechanismKernel& kernel, const Dist& credence)
    : credence_(AsDataPopulation(kernel, credence)) {}

Dist Posterior(const MechanismKernel& kernel, const Prior& prior, int output) {
  return OrThrow(Update(kernel, prior, output, [](const Database& d) { return d; }),
                 kernel, output);
}

Dist PosteriorUnderIntervention(const MechanismKernel& kernel, const Prior& prior,
                                int output, int coordinate, int alternative) {
  CheckCoordinate(kernel, coordinate, alternative);
  return OrThrow(Update(kernel, prior, output,
                        [&](const Database& d) {
                          return WithCoordinate(d, coordinate, alternative);
                        }),
                 kernel, output);
}

RatioBound SemanticGap(const MechanismKernel& kernel, const Prior& prior,
                       int coordinate, int alternative) {
  CheckCoordinate(kernel, coordinate, alternative);
  RatioBound gap;
  for (int o = 0; o < kernel.output_domain().size(); ++o) {
    const auto plain = Update(kernel, prior, o, [](const Database& d) { return d; });
    const auto swapped = Update(kernel, prior, o, [&](const Database& d) {
      return WithCoordinate(d, coordinate, alternative);
    });
    if (!plain || !swapped) continue;
    for (const auto& [d, w] : prior.credence().weights()) {
      const Rational a = plain->Weight(d);
      const Rational b = swapped->Weight(d);
      for (const auto& ratio : {RatioBound::Of(a, b), RatioBound::Of(b, a)}) {
        if (ratio && *ratio > gap) gap = *ratio;
      }
    }
  }
  return gap;
}

}  // namespace dpcausal
