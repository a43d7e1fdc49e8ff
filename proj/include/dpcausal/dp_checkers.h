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


// Executable privacy definitions over a mechanism kernel and, where the
// definition needs one, a population. Each check enumerates its comparisons in
// a fixed order and reports the supremum ratio with the first maximizer.

#ifndef DPCAUSAL_DP_CHECKERS_H_
#define DPCAUSAL_DP_CHECKERS_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dpcausal/mechanisms.h"
#include "dpcausal/rational.h"
#include "dpcausal/sem.h"

namespace dpcausal {

enum class DefinitionId {
  kClassic,
  kStrongAdversaryUniversal,
  kStrongAdversaryOneDist,
  kBayesian0,
  kIndependentBayesian0,
  kWholeDbIntervention,
  kWholeDbUniversal,
  kSinglePointIntervention,
  kSinglePointUniversal,
};

// "classic", "strong_adversary_universal", ...
std::string_view DefinitionName(DefinitionId id);
// Throws kInvalidArgument for unknown names.
DefinitionId ParseDefinition(std::string_view name);
const std::vector<DefinitionId>& AllDefinitions();
// True for the definitions evaluated against one supplied population.
bool NeedsPopulation(DefinitionId id);

// The comparison that reached the reported ratio: coordinate i, the value
// d_i and its alternative d'_i, the output o and, for definitions comparing
// whole databases, the database d itself.
struct CheckWitness {
  int coordinate = 0;
  std::optional<Database> database;
  int value = 0;
  int alternative = 0;
  int output = 0;
  // Which population the comparison was made under.
  std::string population;
  // For point-mass reductions, the database the mass sits on.
  std::optional<Database> point;

  friend bool operator==(const CheckWitness&, const CheckWitness&) = default;
};

struct CheckReport {
  DefinitionId definition = DefinitionId::kClassic;
  RatioBound target_ratio;
  RatioBound achieved;
  bool pass = true;
  std::optional<CheckWitness> witness;
  // Comparisons (i, d, d'_i) dropped by a positivity side condition.
  long skipped_comparisons = 0;
  // How a quantifier over populations was discharged, if there was one.
  std::string reduction;
  std::vector<std::string> notes;
  // Interventional queries answered by a closed form and how many of them
  // disagreed with full enumeration of the submodel.
  long fast_path_queries = 0;
  long fast_path_mismatches = 0;
};

struct CheckOptions {
  // Re-derive every closed-form interventional query by enumeration.
  bool cross_check = true;
  std::string population_label = "P";
};

CheckReport CheckClassic(const MechanismKernel& kernel, const RatioBound& target);

// Strong-adversary (one population), Bayesian-zero and independent
// Bayesian-zero checks under `population` over D^n, via conditioning on the
// lifted canonical model. Errors: kInvalidArgument for other definitions,
// kNotAProductDistribution, kDomainMismatch.
CheckReport CheckAssociative(DefinitionId definition, const MechanismKernel& kernel,
                             const Dist& population, const RatioBound& target,
                             const CheckOptions& options = {});

// Same, for a canonical model with attribute equations; `exogenous` ranges
// over the exogenous R_i.
CheckReport CheckAssociative(DefinitionId definition, const MechanismKernel& kernel,
                             const std::vector<AttributeEquation>& attribute_equations,
                             const Dist& exogenous, const RatioBound& target,
                             const CheckOptions& options = {});

// Strong adversary for every population, through the uniform population.
CheckReport CheckStrongAdversaryUniversal(const MechanismKernel& kernel,
                                          const RatioBound& target);

// Whole-database or single-point intervention under one population.
CheckReport CheckCausal(DefinitionId definition, const MechanismKernel& kernel,
                        const Dist& population, const RatioBound& target,
                        const CheckOptions& options = {});
CheckReport CheckCausal(DefinitionId definition, const MechanismKernel& kernel,
                        const std::vector<AttributeEquation>& attribute_equations,
                        const Dist& exogenous, const RatioBound& target,
                        const CheckOptions& options = {});

// Whole-database or single-point intervention for every population, through
// point masses on D^n.
CheckReport CheckUniversalCausal(DefinitionId definition,
                                 const MechanismKernel& kernel,
                                 const RatioBound& target,
                                 const CheckOptions& options = {});

// Dispatches on the definition. `population` must be present exactly when
// NeedsPopulation(definition).
CheckReport RunCheck(DefinitionId definition, const MechanismKernel& kernel,
                     const std::optional<Dist>& population,
                     const RatioBound& target, const CheckOptions& options = {});

struct FalsificationResult {
  bool found = false;
  // Over D_1..D_n when found.
  std::optional<Dist> population;
  // The failing Bayesian-zero report when found.
  std::optional<CheckReport> report;
  long candidates_examined = 0;
  std::string family;
};

// Looks for a population under which Bayesian-zero fails at `target` while the
// classic check passes. Searches two-point mixtures of databases with weights
// k/m (2 <= m <= max(2, budget)), then i.i.d. product populations whose
// per-point weights are grid fractions with denominator at most budget.
// Nothing found is not a proof. Errors: kInvalidArgument for budget < 1.
FalsificationResult FalsifyBayesian0(const MechanismKernel& kernel,
                                     const RatioBound& target, int budget);

// Recomputes the witness ratio of a report through sem_core queries alone.
// `canonical` is the model the check ran against; definitions that carry
// their own population (classic and the universal ones) ignore it. Returns
// nullopt when the report has no witness.
// Errors: kInvalidArgument when a needed model is missing.
std::optional<RatioBound> ReplayWitness(const CheckReport& report,
                                        const MechanismKernel& kernel,
                                        const std::optional<ProbabilisticSem>& canonical);

}  // namespace dpcausal

#endif  // DPCAUSAL_DP_CHECKERS_H_
