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


#include "dpcausal/sem.h"

#include <algorithm>
#include <queue>
#include <set>

#include "dpcausal/error.h"

namespace dpcausal {
namespace {

std::string Quote(std::string_view s) { return "\"" + std::string(s) + "\""; }

}  // namespace

FiniteDomain::FiniteDomain(std::vector<std::string> values)
    : values_(std::move(values)) {
  if (values_.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "domain must not be empty");
  }
  std::set<std::string> seen;
  for (const auto& v : values_) {
    if (!seen.insert(v).second) {
      throw Error(ErrorKind::kInvalidArgument,
                  "domain value " + Quote(v) + " repeats");
    }
  }
}

std::optional<int> FiniteDomain::Find(std::string_view value) const {
  for (int i = 0; i < size(); ++i) {
    if (values_[i] == value) return i;
  }
  return std::nullopt;
}

int FiniteDomain::IndexOf(std::string_view value) const {
  auto found = Find(value);
  if (!found) {
    throw Error(ErrorKind::kValueOutOfDomain,
                "value " + Quote(value) + " is not in the domain");
  }
  return *found;
}

// ---------------------------------------------------------------------------
// Sem

int Sem::AddVariable(std::string name, VariableKind kind, FiniteDomain domain) {
  if (name.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "variable name must not be empty");
  }
  if (Find(name)) {
    throw Error(ErrorKind::kDuplicateVariable,
                "variable " + Quote(name) + " declared twice");
  }
  if (domain.size() == 0) {
    throw Error(ErrorKind::kInvalidArgument,
                "variable " + Quote(name) + " has an empty domain");
  }
  variables_.push_back(Variable{std::move(name), kind, std::move(domain)});
  equations_.emplace_back();
  return num_variables() - 1;
}

long Sem::ParentRowCount(const std::vector<int>& parents) const {
  long rows = 1;
  for (int p : parents) rows *= variables_.at(p).domain.size();
  return rows;
}

void Sem::SetEquation(std::string_view target,
                      const std::vector<std::string>& parents,
                      std::vector<std::vector<Rational>> rows) {
  const int t = IndexOf(target);
  if (variables_[t].kind == VariableKind::kExogenous) {
    throw Error(ErrorKind::kExogenousTarget,
                "exogenous variable " + Quote(target) + " cannot have an equation");
  }
  StochasticEquation eq;
  eq.target = t;
  std::set<int> seen;
  for (const auto& name : parents) {
    const int p = IndexOf(name);
    if (p == t) {
      throw Error(ErrorKind::kCyclicModel,
                  "variable " + Quote(target) + " lists itself as a parent");
    }
    if (!seen.insert(p).second) {
      throw Error(ErrorKind::kInvalidArgument,
                  "parent " + Quote(name) + " of " + Quote(target) + " repeats");
    }
    eq.parents.push_back(p);
  }
  const long expected = ParentRowCount(eq.parents);
  if (static_cast<long>(rows.size()) != expected) {
    throw Error(ErrorKind::kDomainMismatch,
                "equation for " + Quote(target) + " has " +
                    std::to_string(rows.size()) + " rows, expected " +
                    std::to_string(expected));
  }
  const int width = variables_[t].domain.size();
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (static_cast<int>(rows[r].size()) != width) {
      throw Error(ErrorKind::kDomainMismatch,
                  "row " + std::to_string(r) + " of " + Quote(target) + " has " +
                      std::to_string(rows[r].size()) + " entries, expected " +
                      std::to_string(width));
    }
    Rational sum = 0;
    for (auto& p : rows[r]) {
      p.canonicalize();
      if (sgn(p) < 0) {
        throw Error(ErrorKind::kInvalidKernel,
                    "row " + std::to_string(r) + " of " + Quote(target) +
                        " has a negative entry");
      }
      sum += p;
    }
    if (sum != 1) {
      throw Error(ErrorKind::kInvalidKernel,
                  "row " + std::to_string(r) + " of " + Quote(target) +
                      " sums to " + FormatRational(sum) + ", not 1");
    }
  }
  eq.rows = std::move(rows);
  equations_[t] = std::move(eq);
}

void Sem::SetDeterministicEquation(
    std::string_view target, const std::vector<std::string>& parents,
    const std::function<int(std::span<const int>)>& fn) {
  std::vector<FiniteDomain> domains;
  for (const auto& p : parents) domains.push_back(variables_.at(IndexOf(p)).domain);
  const int width = variables_.at(IndexOf(target)).domain.size();
  std::vector<std::vector<Rational>> rows;
  for (const auto& a : EnumerateAssignments(domains)) {
    const int v = fn(a);
    if (v < 0 || v >= width) {
      throw Error(ErrorKind::kValueOutOfDomain,
                  "deterministic equation for " + Quote(target) +
                      " produced an out-of-domain value");
    }
    std::vector<Rational> row(width, Rational(0));
    row[v] = 1;
    rows.push_back(std::move(row));
  }
  SetEquation(target, parents, std::move(rows));
}

std::optional<int> Sem::Find(std::string_view name) const {
  for (int i = 0; i < num_variables(); ++i) {
    if (variables_[i].name == name) return i;
  }
  return std::nullopt;
}

int Sem::IndexOf(std::string_view name) const {
  auto found = Find(name);
  if (!found) {
    throw Error(ErrorKind::kUnknownVariable, "unknown variable " + Quote(name));
  }
  return *found;
}

const StochasticEquation* Sem::EquationFor(int variable) const {
  const auto& eq = equations_.at(variable);
  return eq ? &*eq : nullptr;
}

std::vector<int> Sem::Exogenous() const {
  std::vector<int> out;
  for (int i = 0; i < num_variables(); ++i) {
    if (variables_[i].kind == VariableKind::kExogenous) out.push_back(i);
  }
  return out;
}

std::vector<int> Sem::Endogenous() const {
  std::vector<int> out;
  for (int i = 0; i < num_variables(); ++i) {
    if (variables_[i].kind == VariableKind::kEndogenous) out.push_back(i);
  }
  return out;
}

std::vector<std::string> Sem::ExogenousNames() const {
  std::vector<std::string> out;
  for (int i : Exogenous()) out.push_back(variables_[i].name);
  return out;
}

const std::vector<Rational>& Sem::RowFor(const StochasticEquation& equation,
                                         const Assignment& assignment) const {
  long index = 0;
  for (int p : equation.parents) {
    index = index * variables_[p].domain.size() + assignment[p];
  }
  return equation.rows[index];
}

std::vector<int> Validate(const Sem& model) {
  const int n = model.num_variables();
  std::vector<int> indegree(n, 0);
  std::vector<std::vector<int>> children(n);
  for (int v : model.Endogenous()) {
    const auto* eq = model.EquationFor(v);
    if (eq == nullptr) {
      throw Error(ErrorKind::kMissingEquation,
                  "endogenous variable " + Quote(model.variable(v).name) +
                      " has no equation");
    }
    if (static_cast<long>(eq->rows.size()) != model.ParentRowCount(eq->parents)) {
      throw Error(ErrorKind::kDomainMismatch,
                  "equation for " + Quote(model.variable(v).name) +
                      " does not cover its parents' domains");
    }
    for (const auto& row : eq->rows) {
      if (static_cast<int>(row.size()) != model.variable(v).domain.size()) {
        throw Error(ErrorKind::kDomainMismatch,
                    "equation for " + Quote(model.variable(v).name) +
                        " does not match its domain");
      }
    }
    for (int p : eq->parents) {
      children[p].push_back(v);
      ++indegree[v];
    }
  }
  std::vector<int> order = model.Exogenous();
  // Kahn's algorithm, smallest declaration index first.
  std::priority_queue<int, std::vector<int>, std::greater<>> ready;
  for (int v : model.Endogenous()) {
    if (indegree[v] == 0) ready.push(v);
  }
  for (int x : model.Exogenous()) {
    for (int c : children[x]) {
      if (--indegree[c] == 0) ready.push(c);
    }
  }
  while (!ready.empty()) {
    const int v = ready.top();
    ready.pop();
    order.push_back(v);
    for (int c : children[v]) {
      if (--indegree[c] == 0) ready.push(c);
    }
  }
  if (static_cast<int>(order.size()) != n) {
    std::string cycle;
    for (int v = 0; v < n; ++v) {
      if (indegree[v] > 0) cycle += (cycle.empty() ? "" : ", ") + model.variable(v).name;
    }
    throw Error(ErrorKind::kCyclicModel, "equations form a cycle through " + cycle);
  }
  return order;
}

bool IsAncestor(const Sem& model, int ancestor, int descendant) {
  std::vector<bool> seen(model.num_variables(), false);
  std::vector<int> stack{descendant};
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    const auto* eq = model.EquationFor(v);
    if (eq == nullptr) continue;
    for (int p : eq->parents) {
      if (p == ancestor) return true;
      if (!seen[p]) {
        seen[p] = true;
        stack.push_back(p);
      }
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// Dist

std::vector<Assignment> EnumerateAssignments(std::span<const FiniteDomain> domains) {
  std::vector<Assignment> out;
  Assignment current(domains.size(), 0);
  for (const auto& d : domains) {
    if (d.size() == 0) return out;
  }
  while (true) {
    out.push_back(current);
    int k = static_cast<int>(domains.size()) - 1;
    while (k >= 0 && ++current[k] == domains[k].size()) {
      current[k] = 0;
      --k;
    }
    if (k < 0) break;
  }
  return out;
}

Dist::Dist(std::vector<std::string> names, std::vector<FiniteDomain> domains,
           std::map<Assignment, Rational> weights)
    : names_(std::move(names)), domains_(std::move(domains)) {
  if (names_.size() != domains_.size()) {
    throw Error(ErrorKind::kInvalidArgument,
                "distribution needs one domain per variable");
  }
  std::set<std::string> seen;
  for (const auto& n : names_) {
    if (!seen.insert(n).second) {
      throw Error(ErrorKind::kDuplicateVariable,
                  "variable " + Quote(n) + " repeats in distribution");
    }
  }
  Rational sum = 0;
  for (auto& [a, w] : weights) {
    if (a.size() != names_.size()) {
      throw Error(ErrorKind::kInvalidDistribution,
                  "assignment has the wrong number of coordinates");
    }
    for (std::size_t k = 0; k < a.size(); ++k) {
      if (a[k] < 0 || a[k] >= domains_[k].size()) {
        throw Error(ErrorKind::kValueOutOfDomain,
                    "assignment value out of domain for " + Quote(names_[k]));
      }
    }
    w.canonicalize();
    if (sgn(w) < 0) {
      throw Error(ErrorKind::kInvalidDistribution, "negative probability weight");
    }
    sum += w;
    if (sgn(w) > 0) weights_.emplace(a, w);
  }
  if (sum != 1) {
    throw Error(ErrorKind::kInvalidDistribution,
                "weights sum to " + FormatRational(sum) + ", not 1");
  }
}

Dist Dist::PointMass(std::vector<std::string> names,
                     std::vector<FiniteDomain> domains, Assignment point) {
  std::map<Assignment, Rational> w;
  w.emplace(std::move(point), Rational(1));
  return Dist(std::move(names), std::move(domains), std::move(w));
}

Dist Dist::Uniform(std::vector<std::string> names,
                   std::vector<FiniteDomain> domains) {
  const auto all = EnumerateAssignments(domains);
  std::map<Assignment, Rational> w;
  const Rational each(1, static_cast<long>(all.size()));
  for (const auto& a : all) w.emplace(a, each);
  return Dist(std::move(names), std::move(domains), std::move(w));
}

std::optional<int> Dist::Find(std::string_view name) const {
  for (int i = 0; i < num_variables(); ++i) {
    if (names_[i] == name) return i;
  }
  return std::nullopt;
}

int Dist::IndexOf(std::string_view name) const {
  auto found = Find(name);
  if (!found) {
    throw Error(ErrorKind::kUnknownVariable,
                "distribution has no variable " + Quote(name));
  }
  return *found;
}

Rational Dist::Weight(const Assignment& assignment) const {
  auto it = weights_.find(assignment);
  return it == weights_.end() ? Rational(0) : it->second;
}

Rational Dist::Probability(
    const std::function<bool(const Assignment&)>& event) const {
  Rational total = 0;
  for (const auto& [a, w] : weights_) {
    if (event(a)) total += w;
  }
  return total;
}

Dist Dist::Marginal(const std::vector<std::string>& names) const {
  std::vector<int> idx;
  std::vector<FiniteDomain> doms;
  for (const auto& n : names) {
    idx.push_back(IndexOf(n));
    doms.push_back(domains_[idx.back()]);
  }
  std::map<Assignment, Rational> w;
  for (const auto& [a, p] : weights_) {
    Assignment b;
    b.reserve(idx.size());
    for (int i : idx) b.push_back(a[i]);
    w[b] += p;
  }
  return Dist(names, std::move(doms), std::move(w));
}

bool Dist::HasFullSupport() const {
  long total = 1;
  for (const auto& d : domains_) total *= d.size();
  return static_cast<long>(weights_.size()) == total;
}

std::string Dist::Label(const Assignment& assignment) const {
  std::string out = "(";
  for (std::size_t k = 0; k < assignment.size(); ++k) {
    if (k > 0) out += ",";
    out += domains_.at(k).value(assignment[k]);
  }
  return out + ")";
}

std::function<bool(const Assignment&)> CompileEvent(const Dist& dist,
                                                    const Event& event) {
  std::vector<std::pair<int, int>> tests;
  for (const auto& [name, value] : event.equalities) {
    const int k = dist.IndexOf(name);
    tests.emplace_back(k, dist.domains()[k].IndexOf(value));
  }
  return [tests](const Assignment& a) {
    for (const auto& [k, v] : tests) {
      if (a[k] != v) return false;
    }
    return true;
  };
}

Rational Probability(const Dist& dist, const Event& event) {
  return dist.Probability(CompileEvent(dist, event));
}

Dist Condition(const Dist& dist,
               const std::function<bool(const Assignment&)>& event) {
  const Rational mass = dist.Probability(event);
  if (sgn(mass) == 0) {
    throw Error(ErrorKind::kZeroProbabilityEvent,
                "conditioning event has probability zero");
  }
  std::map<Assignment, Rational> w;
  for (const auto& [a, p] : dist.weights()) {
    if (event(a)) w.emplace(a, Rational(p / mass));
  }
  return Dist(dist.names(), dist.domains(), std::move(w));
}

Dist Condition(const Dist& dist, const Event& event) {
  return Condition(dist, CompileEvent(dist, event));
}

std::optional<Dist> TryCondition(const Dist& dist, const Event& event) {
  const auto test = CompileEvent(dist, event);
  if (sgn(dist.Probability(test)) == 0) return std::nullopt;
  return Condition(dist, test);
}

// ---------------------------------------------------------------------------
// Probabilistic semantics

ProbabilisticSem MakeProbabilisticSem(Sem model, Dist exogenous) {
  Validate(model);
  const auto exo = model.Exogenous();
  if (static_cast<int>(exo.size()) != exogenous.num_variables()) {
    throw Error(ErrorKind::kDomainMismatch,
                "exogenous distribution covers " +
                    std::to_string(exogenous.num_variables()) +
                    " variables, the model has " + std::to_string(exo.size()));
  }
  for (std::size_t k = 0; k < exo.size(); ++k) {
    const auto& v = model.variable(exo[k]);
    if (exogenous.names()[k] != v.name) {
      throw Error(ErrorKind::kDomainMismatch,
                  "exogenous distribution variable " +
                      Quote(exogenous.names()[k]) + " should be " + Quote(v.name));
    }
    if (!(exogenous.domains()[k] == v.domain)) {
      throw Error(ErrorKind::kDomainMismatch,
                  "exogenous distribution domain differs for " + Quote(v.name));
    }
  }
  return ProbabilisticSem{std::move(model), std::move(exogenous)};
}

namespace {

// Joint over all model variables (declaration order) for one exogenous
// assignment, weighted by `scale`, accumulated into `out`.
void Propagate(const Sem& model, const std::vector<int>& order,
               const std::vector<int>& exo, const Assignment& exo_values,
               const Rational& scale, std::map<Assignment, Rational>& out) {
  Assignment start(model.num_variables(), 0);
  for (std::size_t k = 0; k < exo.size(); ++k) start[exo[k]] = exo_values[k];
  std::vector<std::pair<Assignment, Rational>> frontier{{start, scale}};
  for (std::size_t pos = exo.size(); pos < order.size(); ++pos) {
    const int v = order[pos];
    const auto& eq = *model.EquationFor(v);
    std::vector<std::pair<Assignment, Rational>> next;
    for (auto& [a, w] : frontier) {
      const auto& row = model.RowFor(eq, a);
      for (int x = 0; x < static_cast<int>(row.size()); ++x) {
        if (sgn(row[x]) == 0) continue;
        Assignment b = a;
        b[v] = x;
        next.emplace_back(std::move(b), Rational(w * row[x]));
      }
    }
    frontier = std::move(next);
  }
  for (auto& [a, w] : frontier) out[a] += w;
}

std::vector<FiniteDomain> DomainsOf(const Sem& model, const std::vector<int>& vars) {
  std::vector<FiniteDomain> out;
  for (int v : vars) out.push_back(model.variable(v).domain);
  return out;
}

std::vector<std::string> NamesOf(const Sem& model, const std::vector<int>& vars) {
  std::vector<std::string> out;
  for (int v : vars) out.push_back(model.variable(v).name);
  return out;
}

std::vector<int> AllVariables(const Sem& model) {
  std::vector<int> out(model.num_variables());
  for (int i = 0; i < model.num_variables(); ++i) out[i] = i;
  return out;
}

}  // namespace

Dist SemanticsGivenExogenous(const Sem& model, const Assignment& exogenous) {
  const auto order = Validate(model);
  const auto exo = model.Exogenous();
  if (exogenous.size() != exo.size()) {
    throw Error(ErrorKind::kInvalidArgument,
                "exogenous assignment has the wrong number of values");
  }
  for (std::size_t k = 0; k < exo.size(); ++k) {
    if (exogenous[k] < 0 || exogenous[k] >= model.variable(exo[k]).domain.size()) {
      throw Error(ErrorKind::kValueOutOfDomain,
                  "exogenous value out of domain for " +
                      Quote(model.variable(exo[k]).name));
    }
  }
  std::map<Assignment, Rational> full;
  Propagate(model, order, exo, exogenous, Rational(1), full);
  const auto endo = model.Endogenous();
  std::map<Assignment, Rational> w;
  for (const auto& [a, p] : full) {
    Assignment b;
    for (int v : endo) b.push_back(a[v]);
    w[b] += p;
  }
  return Dist(NamesOf(model, endo), DomainsOf(model, endo), std::move(w));
}

Dist Lift(const ProbabilisticSem& psem) {
  const auto order = Validate(psem.model);
  const auto exo = psem.model.Exogenous();
  std::map<Assignment, Rational> w;
  for (const auto& [x, p] : psem.exogenous.weights()) {
    Propagate(psem.model, order, exo, x, p, w);
  }
  const auto all = AllVariables(psem.model);
  return Dist(NamesOf(psem.model, all), DomainsOf(psem.model, all), std::move(w));
}

Sem Intervene(const Sem& model, std::string_view variable, std::string_view value) {
  const int v = model.IndexOf(variable);
  if (model.variable(v).kind == VariableKind::kExogenous) {
    throw Error(ErrorKind::kExogenousTarget,
                "cannot intervene on exogenous variable " + Quote(variable) +
                    "; pin its distribution instead");
  }
  const int x = model.variable(v).domain.IndexOf(value);
  Sem out = model;
  out.SetDeterministicEquation(variable, {}, [x](std::span<const int>) { return x; });
  return out;
}

Sem Intervene(const Sem& model, const std::vector<Intervention>& interventions) {
  Sem out = model;
  for (const auto& i : interventions) out = Intervene(out, i.variable, i.value);
  return out;
}

Dist InterventionalJoint(const ProbabilisticSem& psem,
                         const std::vector<Intervention>& interventions) {
  if (interventions.empty()) return Lift(psem);
  return Lift(ProbabilisticSem{Intervene(psem.model, interventions), psem.exogenous});
}

Rational Query(const ProbabilisticSem& psem, const Event& target,
               const std::vector<Intervention>& interventions,
               const Event& conditions) {
  const Dist joint = InterventionalJoint(psem, interventions);
  if (conditions.empty()) return Probability(joint, target);
  return Probability(Condition(joint, conditions), target);
}

Dist PinExogenous(const Dist& exogenous, std::string_view variable,
                  std::string_view value) {
  const int k = exogenous.IndexOf(variable);
  const int x = exogenous.domains()[k].IndexOf(value);
  std::vector<std::string> others;
  for (int i = 0; i < exogenous.num_variables(); ++i) {
    if (i != k) others.push_back(exogenous.names()[i]);
  }
  const Dist rest = exogenous.Marginal(others);
  std::map<Assignment, Rational> w;
  for (const auto& [a, p] : rest.weights()) {
    Assignment b;
    int j = 0;
    for (int i = 0; i < exogenous.num_variables(); ++i) {
      b.push_back(i == k ? x : a[j++]);
    }
    w.emplace(std::move(b), p);
  }
  return Dist(exogenous.names(), exogenous.domains(), std::move(w));
}

}  // namespace dpcausal
