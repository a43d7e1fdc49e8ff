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


// Randomized algorithms as exact kernels, the canonical causal model wrapping
// a kernel, and the classic neighbouring-database ratio.

#ifndef DPCAUSAL_MECHANISMS_H_
#define DPCAUSAL_MECHANISMS_H_

#include <optional>
#include <string>
#include <vector>

#include "dpcausal/rational.h"
#include "dpcausal/sem.h"

namespace dpcausal {

// One data value index per data point.
using Database = std::vector<int>;

// A randomized algorithm A : D^n -> Dist(O) as a table. Rows are indexed by
// database in lexicographic order, first coordinate most significant.
class MechanismKernel {
 public:
  // Errors: kInvalidArgument (n < 1), kValueOutOfDomain (null value missing
  // from the data domain), kDomainMismatch (row count or row width),
  // kInvalidKernel (negative entries or rows not summing to 1).
  MechanismKernel(int n, FiniteDomain data_domain, std::string null_value,
                  FiniteDomain output_domain,
                  std::vector<std::vector<Rational>> rows);

  int n() const { return n_; }
  const FiniteDomain& data_domain() const { return data_domain_; }
  const std::string& null_value() const { return null_value_; }
  int null_index() const { return data_domain_.IndexOf(null_value_); }
  const FiniteDomain& output_domain() const { return output_domain_; }
  const std::vector<std::vector<Rational>>& rows() const { return rows_; }

  int num_databases() const { return static_cast<int>(rows_.size()); }
  Database DatabaseAt(int index) const;
  int IndexOf(const Database& database) const;
  const std::vector<Rational>& Row(const Database& database) const;
  const Rational& Probability(const Database& database, int output) const;

  // "(pos,neg)".
  std::string DatabaseLabel(const Database& database) const;

  friend bool operator==(const MechanismKernel&, const MechanismKernel&) = default;

 private:
  int n_;
  FiniteDomain data_domain_;
  std::string null_value_;
  FiniteDomain output_domain_;
  std::vector<std::vector<Rational>> rows_;
};

// `database` with coordinate `i` replaced by `value`.
Database WithCoordinate(Database database, int i, int value);

// Domain {pos, neg, null}. Each respondent independently reports the truth
// with probability q and the opposite answer otherwise; a null respondent
// answers with a fair coin. Outputs are the answer tuples over {pos, neg}
// ("pos" / "neg" when n = 1, "(pos,neg)" style otherwise).
// Errors: kBiasOutOfRange unless 1/2 < q < 1; kInvalidArgument for n < 1.
MechanismKernel RandomizedResponseKernel(int n, const Rational& q);

// Domain {pos, neg, null}, outputs "0".."n": the number of pos entries plus
// two-sided geometric noise with Fr[k] proportional to r^|k|, with the mass
// beyond either end folded onto the end counts.
// Errors: kRatioOutOfRange unless 0 < r < 1; kInvalidArgument for n < 1.
MechanismKernel GeometricCountKernel(int n, const Rational& r);

// n = 2 over {0, 1, 2} with null "0": input (2,2) always outputs 0, every
// other input is a fair coin over {0, 1}.
MechanismKernel JointHiddenValueKernel();

// n = 1 over {0, 1, 2} with null "0": input 2 always outputs 0, inputs 0 and
// 1 are a fair coin over {0, 1}.
MechanismKernel HiddenValueKernel();

// Every database gets `row`.
MechanismKernel ConstantKernel(int n, FiniteDomain data_domain,
                               std::string null_value, FiniteDomain output_domain,
                               std::vector<Rational> row);

// Names used by the canonical model, 0-based coordinate in, "R_1" style out.
std::string AttributeName(int i);
std::string DataPointName(int i);
inline constexpr const char* kDatabaseName = "D";
inline constexpr const char* kOutputName = "O";

// An extra equation in the canonical model. A target R_i makes that attribute
// endogenous (e.g. R_2 := R_1); a target D_i replaces the default copy
// D_i := R_i by an input manipulation. Parents must be attributes R_j.
struct AttributeEquation {
  std::string target;
  std::vector<std::string> parents;
  std::vector<std::vector<Rational>> rows;

  friend bool operator==(const AttributeEquation&, const AttributeEquation&) = default;
};

// The model R_i -> D_i -> D -> O: variables R_1..R_n, D_1..D_n, D, O in that
// declaration order, D := <D_1..D_n> with values labelled like the kernel's
// databases, O := A(D).
// Errors: kInvalidArgument for equations on other targets or with non-R
// parents, plus anything Sem validation raises (e.g. kCyclicModel).
Sem BuildCanonicalSem(const MechanismKernel& kernel,
                      const std::vector<AttributeEquation>& attribute_equations = {});

// `exogenous` ranges over the exogenous R_i in order.
ProbabilisticSem BuildCanonicalModel(const MechanismKernel& kernel,
                                     const std::vector<AttributeEquation>& attribute_equations,
                                     Dist exogenous);

// Canonical model without attribute equations, with `population` (any n
// variables over the data domain, in coordinate order) placed on R_1..R_n.
// Errors: kDomainMismatch.
ProbabilisticSem BuildCanonicalModel(const MechanismKernel& kernel,
                                     const Dist& population);

// `population` renamed to D_1..D_n after checking its shape. Errors:
// kDomainMismatch.
Dist AsDataPopulation(const MechanismKernel& kernel, const Dist& population);

struct NeighborWitness {
  int coordinate = 0;
  Database database;
  int alternative = 0;
  int output = 0;
};

struct ClassicResult {
  RatioBound ratio;
  std::optional<NeighborWitness> witness;
};

// sup over i, d, d'_i != d_i, o of A(d)[o] / A(d with d'_i)[o], enumerated in
// that order. 0/0 is skipped and p/0 is infinite. The witness is the first
// strict maximizer and is absent when the ratio is 1.
ClassicResult ComputeClassicEpsilon(const MechanismKernel& kernel);

}  // namespace dpcausal

#endif  // DPCAUSAL_MECHANISMS_H_
