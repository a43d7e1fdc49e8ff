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


// An adversary's credences about the database and how an observed output
// moves them, with and without one data point replaced by intervention.

#ifndef DPCAUSAL_ADVERSARY_H_
#define DPCAUSAL_ADVERSARY_H_

#include "dpcausal/mechanisms.h"
#include "dpcausal/rational.h"
#include "dpcausal/sem.h"

namespace dpcausal {

// Credence over D^n, kept apart from the frequencies of a population even
// though the arithmetic is the same.
class Prior {
 public:
  // `credence` must have the kernel's shape; it is renamed to D_1..D_n.
  // Errors: kDomainMismatch.
  Prior(const MechanismKernel& kernel, const Dist& credence);

  const Dist& credence() const { return credence_; }

 private:
  Dist credence_;
};

// Cr[D = d | O = o] proportional to A(d)[o] * Cr[D = d].
// Errors: kZeroEvidence when o has probability 0 under the prior,
// kValueOutOfDomain for a bad output index.
Dist Posterior(const MechanismKernel& kernel, const Prior& prior, int output);

// The same update with the likelihood of every database d read from
// A(d with d_i replaced by `alternative`).
Dist PosteriorUnderIntervention(const MechanismKernel& kernel, const Prior& prior,
                                int output, int coordinate, int alternative);

// sup over outputs feasible under both updates and databases d of the ratio
// of the two posteriors at d, in both directions.
RatioBound SemanticGap(const MechanismKernel& kernel, const Prior& prior,
                       int coordinate, int alternative);

}  // namespace dpcausal

#endif  // DPCAUSAL_ADVERSARY_H_
