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


// Relative-probability effect sizes between a source variable X and a sink
// tuple Y, their bound over all exogenous distributions, and sequential
// composition of two models.

#ifndef DPCAUSAL_BRP_H_
#define DPCAUSAL_BRP_H_

#include <optional>
#include <string>
#include <vector>

#include "dpcausal/rational.h"
#include "dpcausal/sem.h"

namespace dpcausal {

struct RelativeProbability {
  RatioBound ratio;
  // Both probabilities were 0; the ratio is reported as 1.
  bool degenerate = false;
};

// Fr[rho | do(phi)] / Fr[rho | do(psi)]. phi and psi must set the same
// variable. An exogenous variable is set by pinning it in the exogenous
// distribution. Errors: kInvalidArgument for mismatched variables, plus
// intervention and event errors.
RelativeProbability ComputeRelativeProbability(const ProbabilisticSem& psem,
                                               const Event& rho,
                                               const Intervention& phi,
                                               const Intervention& psi);

struct EffectWitness {
  // One value index per sink variable.
  Assignment sink;
  int source_value = 0;
  int alternative = 0;
  // Exogenous assignment of the point mass, for bounds over all populations.
  std::optional<Assignment> exogenous;
};

struct EffectBound {
  RatioBound bound;
  std::optional<EffectWitness> witness;
  // Comparisons dropped because both sides were 0.
  long degenerate = 0;
};

// max over y, x1 != x2 of Fr[Y = y | do(X = x1)] / Fr[Y = y | do(X = x2)] for
// the given exogenous distribution, enumerated y, x1, x2.
// Errors: kInvalidEffectQuery when the source is in the sink or some sink
// variable is an ancestor of the source.
EffectBound MaxRelativeProbability(const ProbabilisticSem& psem,
                                   const std::vector<std::string>& sink,
                                   const std::string& source);

// The same maximum, further maximised over every exogenous distribution. The
// ratio of two linear functions of the distribution peaks at a vertex of the
// simplex, so point masses on exogenous assignments suffice; vertices where
// both sides vanish are skipped.
EffectBound BrpBound(const Sem& model, const std::vector<std::string>& sink,
                     const std::string& source);

// Names the shared variables of two stages: m1 maps `source` to
// `stage1_output`; m2 reads both and produces `stage2_output`.
struct SequentialInterface {
  std::string source;
  std::string stage1_output;
  std::string stage2_output;

  friend bool operator==(const SequentialInterface&, const SequentialInterface&) = default;
};

struct SequentialComposition {
  Sem m1;
  Sem m2;
  SequentialInterface interface;
  // m1 followed by m2's own variables and equations; sink <stage1, stage2>.
  Sem composed;
};

// Errors: kNotInSequence when m1 lacks the source or stage-1 output, the
// stage-1 output is not endogenous in m1 or is an ancestor of the source, m2
// defines an equation for the source or the stage-1 output, m2 lacks the
// stage-2 output, or m2's other variable names clash with m1's;
// kDomainMismatch when the shared variables' domains differ.
SequentialComposition ComposeSequential(const Sem& m1, const Sem& m2,
                                        const SequentialInterface& interface);

struct CompositionReport {
  EffectBound stage1;
  EffectBound stage2;
  EffectBound composed;
  RatioBound declared1;
  RatioBound declared2;
  // composed.bound <= declared1 * declared2.
  bool pass = true;
};

// Verifies both stage bounds against their declared ratios, then checks the
// composed bound against their product. Errors: kPremiseViolated.
CompositionReport CheckComposition(const SequentialComposition& composition,
                                   const RatioBound& ratio1,
                                   const RatioBound& ratio2);

}  // namespace dpcausal

#endif  // DPCAUSAL_BRP_H_
