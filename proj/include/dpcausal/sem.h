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

// Finite-domain probabilistic structural equation models with exact
// enumeration-based inference.
//
// A Sem is a list of variables, each with an ordered finite domain, plus one
// stochastic equation (an extensional kernel table) per endogenous variable.
// Exogenous variables have no equation; a ProbabilisticSem pairs a Sem with a
// distribution over them. Interventions replace an endogenous variable's
// equation by a constant. Every quantity is an exact Rational.
//
// Enumeration order everywhere is lexicographic in declared variable order,
// with values in declared domain order. Reports depend on it.

#ifndef DPCAUSAL_SEM_H_
#define DPCAUSAL_SEM_H_

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dpcausal/rational.h"

namespace dpcausal {

// Value indices, one per variable of some fixed variable list.
using Assignment = std::vector<int>;

class FiniteDomain {
 public:
  FiniteDomain() = default;
  // Throws kInvalidArgument when empty or when values repeat.
  explicit FiniteDomain(std::vector<std::string> values);

  int size() const { return static_cast<int>(values_.size()); }
  const std::string& value(int index) const { return values_.at(index); }
  const std::vector<std::string>& values() const { return values_; }

  std::optional<int> Find(std::string_view value) const;
  // Throws kValueOutOfDomain.
  int IndexOf(std::string_view value) const;

  friend bool operator==(const FiniteDomain&, const FiniteDomain&) = default;

 private:
  std::vector<std::string> values_;
};

enum class VariableKind { kExogenous, kEndogenous };

struct Variable {
  std::string name;
  VariableKind kind = VariableKind::kEndogenous;
  FiniteDomain domain;

  friend bool operator==(const Variable&, const Variable&) = default;
};

// Kernel rows are indexed by the parent value tuple read as a mixed-radix
// number, first parent most significant. Each row is a distribution over the
// target's domain, in domain order.
struct StochasticEquation {
  int target = -1;
  std::vector<int> parents;
  std::vector<std::vector<Rational>> rows;

  friend bool operator==(const StochasticEquation&,
                         const StochasticEquation&) = default;
};

class Sem {
 public:
  // Throws kDuplicateVariable.
  int AddVariable(std::string name, VariableKind kind, FiniteDomain domain);

  // Replaces any previous equation for `target`. Checks the local invariants:
  // target endogenous (kExogenousTarget), target not among parents
  // (kCyclicModel), table total over the parent cross product and each row
  // sized to the target domain (kDomainMismatch), rows nonnegative and summing
  // to exactly 1 (kInvalidKernel).
  void SetEquation(std::string_view target, const std::vector<std::string>& parents,
                   std::vector<std::vector<Rational>> rows);

  // Convenience for deterministic equations: `fn` maps parent value indices to
  // the target value index.
  void SetDeterministicEquation(std::string_view target,
                                const std::vector<std::string>& parents,
                                const std::function<int(std::span<const int>)>& fn);

  int num_variables() const { return static_cast<int>(variables_.size()); }
  const Variable& variable(int index) const { return variables_.at(index); }
  const std::vector<Variable>& variables() const { return variables_; }

  std::optional<int> Find(std::string_view name) const;
  // Throws kUnknownVariable.
  int IndexOf(std::string_view name) const;

  // nullptr for exogenous variables and endogenous ones still lacking one.
  const StochasticEquation* EquationFor(int variable) const;

  // Declaration-ordered index lists.
  std::vector<int> Exogenous() const;
  std::vector<int> Endogenous() const;
  std::vector<std::string> ExogenousNames() const;

  // Row of `equation` selected by the parent values inside `assignment`
  // (indexed by model variable).
  const std::vector<Rational>& RowFor(const StochasticEquation& equation,
                                      const Assignment& assignment) const;

  // Number of kernel rows an equation over these parents must have.
  long ParentRowCount(const std::vector<int>& parents) const;

  friend bool operator==(const Sem&, const Sem&) = default;

 private:
  std::vector<Variable> variables_;
  std::vector<std::optional<StochasticEquation>> equations_;
};

// Checks the global invariants and returns a topological order: exogenous
// variables first in declaration order, then endogenous variables, each after
// all its parents, ties broken by declaration order.
// Errors: kMissingEquation, kCyclicModel, kDomainMismatch.
std::vector<int> Validate(const Sem& model);

// True when `ancestor` can reach `descendant` along parent edges.
bool IsAncestor(const Sem& model, int ancestor, int descendant);

// An exact distribution over assignments to a fixed, named variable list.
// Weights are positive and sum to exactly 1; zero weights are never stored.
class Dist {
 public:
  // Throws kInvalidDistribution for negative weights or a sum other than 1,
  // kValueOutOfDomain for assignments outside the domains, kDuplicateVariable
  // for repeated names.
  Dist(std::vector<std::string> names, std::vector<FiniteDomain> domains,
       std::map<Assignment, Rational> weights);

  static Dist PointMass(std::vector<std::string> names,
                        std::vector<FiniteDomain> domains, Assignment point);
  // Uniform over the whole cross product (full support).
  static Dist Uniform(std::vector<std::string> names,
                      std::vector<FiniteDomain> domains);

  int num_variables() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<FiniteDomain>& domains() const { return domains_; }
  const std::map<Assignment, Rational>& weights() const { return weights_; }

  std::optional<int> Find(std::string_view name) const;
  int IndexOf(std::string_view name) const;  // Throws kUnknownVariable.

  // Zero for assignments outside the support.
  Rational Weight(const Assignment& assignment) const;
  Rational Probability(const std::function<bool(const Assignment&)>& event) const;

  // Distribution of the listed variables, in the listed order.
  Dist Marginal(const std::vector<std::string>& names) const;

  // True when every assignment of the cross product has positive weight.
  bool HasFullSupport() const;

  // Human-readable label of an assignment, e.g. "(pos,neg)".
  std::string Label(const Assignment& assignment) const;

  friend bool operator==(const Dist&, const Dist&) = default;

 private:
  std::vector<std::string> names_;
  std::vector<FiniteDomain> domains_;
  std::map<Assignment, Rational> weights_;
};

// Enumerates the cross product of the domains lexicographically.
std::vector<Assignment> EnumerateAssignments(std::span<const FiniteDomain> domains);

// A conjunction of variable = value tests, by name.
struct Event {
  std::vector<std::pair<std::string, std::string>> equalities;

  bool empty() const { return equalities.empty(); }
};

// Resolves names and values against `dist`; throws kUnknownVariable or
// kValueOutOfDomain.
std::function<bool(const Assignment&)> CompileEvent(const Dist& dist,
                                                    const Event& event);

Rational Probability(const Dist& dist, const Event& event);

// Renormalised restriction. Throws kZeroProbabilityEvent when the event has
// probability zero; callers implementing positivity side conditions catch it
// or use TryCondition.
Dist Condition(const Dist& dist, const std::function<bool(const Assignment&)>& event);
Dist Condition(const Dist& dist, const Event& event);
std::optional<Dist> TryCondition(const Dist& dist, const Event& event);

struct ProbabilisticSem {
  Sem model;
  // Over the model's exogenous variables, in declaration order.
  Dist exogenous;

  friend bool operator==(const ProbabilisticSem&, const ProbabilisticSem&) = default;
};

// Validates the model and checks that the distribution's variable list and
// domains equal the model's exogenous variables. Errors: validation kinds,
// kDomainMismatch.
ProbabilisticSem MakeProbabilisticSem(Sem model, Dist exogenous);

// Joint distribution over the endogenous variables (declaration order) given a
// full assignment `exogenous` to the exogenous variables (declaration order).
// Computed bottom-up along the topological order by multiplying kernel rows;
// equations draw independent randomness.
Dist SemanticsGivenExogenous(const Sem& model, const Assignment& exogenous);

// Full joint over all variables (declaration order):
// sum_x P(x) * SemanticsGivenExogenous(model, x).
Dist Lift(const ProbabilisticSem& psem);

// Submodel with `variable`'s equation replaced by the constant `value`. Defined
// for zero-probability values. Errors: kUnknownVariable, kValueOutOfDomain,
// kExogenousTarget.
Sem Intervene(const Sem& model, std::string_view variable, std::string_view value);

struct Intervention {
  std::string variable;
  std::string value;
};

// Applies interventions left to right; later writes to the same variable win.
Sem Intervene(const Sem& model, const std::vector<Intervention>& interventions);

// Fr[target | do(interventions), conditions]. Empty conditions mean no
// conditioning. Propagates kZeroProbabilityEvent and intervention errors.
Rational Query(const ProbabilisticSem& psem, const Event& target,
               const std::vector<Intervention>& interventions = {},
               const Event& conditions = {});

// Lifted joint of the intervened model.
Dist InterventionalJoint(const ProbabilisticSem& psem,
                         const std::vector<Intervention>& interventions);

// Exogenous what-if: the exogenous distribution with `variable` pinned to
// `value` and every other exogenous variable keeping its marginal. This is how
// an intervention on an exogenous variable is expressed.
Dist PinExogenous(const Dist& exogenous, std::string_view variable,
                  std::string_view value);

}  // namespace dpcausal

#endif  // DPCAUSAL_SEM_H_
