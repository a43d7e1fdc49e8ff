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


#include "dpcausal/brp.h"

#include <map>

#include "dpcausal/error.h"

namespace dpcausal {
namespace {

std::string Quote(const std::string& s) { return "\"" + s + "\""; }

// Joint over all variables with `variable` set to `value`.
Dist JointUnder(const ProbabilisticSem& psem, const std::string& variable,
                const std::string& value) {
  const int v = psem.model.IndexOf(variable);
  if (psem.model.variable(v).kind == VariableKind::kExogenous) {
    return Lift(ProbabilisticSem{psem.model, PinExogenous(psem.exogenous, variable, value)});
  }
  return InterventionalJoint(psem, {{variable, value}});
}

std::map<Assignment, Rational> Project(const Dist& joint, const std::vector<int>& vars) {
  std::map<Assignment, Rational> out;
  for (const auto& [a, w] : joint.weights()) {
    Assignment b;
    b.reserve(vars.size());
    for (int v : vars) b.push_back(a[v]);
    out[b] += w;
  }
  return out;
}

struct ResolvedQuery {
  std::vector<int> sink;
  int source = -1;
  std::vector<FiniteDomain> sink_domains;
};

ResolvedQuery Resolve(const Sem& model, const std::vector<std::string>& sink,
                      const std::string& source) {
  Validate(model);
  ResolvedQuery q;
  q.source = model.IndexOf(source);
  if (sink.empty()) {
    throw Error(ErrorKind::kInvalidEffectQuery, "the sink must name at least one variable");
  }
  for (const auto& name : sink) {
    const int y = model.IndexOf(name);
    if (y == q.source) {
      throw Error(ErrorKind::kInvalidEffectQuery,
                  "source " + Quote(source) + " is part of the sink");
    }
    if (IsAncestor(model, y, q.source)) {
      throw Error(ErrorKind::kInvalidEffectQuery,
                  "sink variable " + Quote(name) + " is an ancestor of the source " +
                      Quote(source));
    }
    q.sink.push_back(y);
    q.sink_domains.push_back(model.variable(y).domain);
  }
  return q;
}

// Maximum over y, x1 != x2 given Fr[Y = . | do(X = x)] for every x.
void MaxOver(const ResolvedQuery& q,
             const std::vector<std::map<Assignment, Rational>>& by_value,
             const std::optional<Assignment>& exogenous, EffectBound& out) {
  const int values = static_cast<int>(by_value.size());
  const auto weight = [](const std::map<Assignment, Rational>& m, const Assignment& y) {
    auto it = m.find(y);
    return it == m.end() ? Rational(0) : it->second;
  };
  for (const auto& y : EnumerateAssignments(q.sink_domains)) {
    for (int x1 = 0; x1 < values; ++x1) {
      for (int x2 = 0; x2 < values; ++x2) {
        if (x1 == x2) continue;
        const auto ratio = RatioBound::Of(weight(by_value[x1], y), weight(by_value[x2], y));
        if (!ratio) {
          ++out.degenerate;
          continue;
        }
        if (*ratio > out.bound) {
          out.bound = *ratio;
          out.witness = EffectWitness{y, x1, x2, exogenous};
        }
      }
    }
  }
}

std::vector<std::map<Assignment, Rational>> SinkByValue(const ProbabilisticSem& psem,
                                                        const ResolvedQuery& q) {
  const Variable& x = psem.model.variable(q.source);
  std::vector<std::map<Assignment, Rational>> out;
  for (const auto& value : x.domain.values()) {
    out.push_back(Project(JointUnder(psem, x.name, value), q.sink));
  }
  return out;
}

}  // namespace

RelativeProbability ComputeRelativeProbability(const ProbabilisticSem& psem,
                                               const Event& rho,
                                               const Intervention& phi,
                                               const Intervention& psi) {
  if (phi.variable != psi.variable) {
    throw Error(ErrorKind::kInvalidArgument,
                "both interventions must set the same variable");
  }
  const Rational num = Probability(JointUnder(psem, phi.variable, phi.value), rho);
  const Rational den = Probability(JointUnder(psem, psi.variable, psi.value), rho);
  const auto ratio = RatioBound::Of(num, den);
  if (!ratio) return RelativeProbability{RatioBound(), true};
  return RelativeProbability{*ratio, false};
}

EffectBound MaxRelativeProbability(const ProbabilisticSem& psem,
                                   const std::vector<std::string>& sink,
                                   const std::string& source) {
  const ResolvedQuery q = Resolve(psem.model, sink, source);
  EffectBound out;
  MaxOver(q, SinkByValue(psem, q), std::nullopt, out);
  return out;
}

EffectBound BrpBound(const Sem& model, const std::vector<std::string>& sink,
                     const std::string& source) {
  const ResolvedQuery q = Resolve(model, sink, source);
  const auto exo = model.Exogenous();
  std::vector<FiniteDomain> domains;
  for (int v : exo) domains.push_back(model.variable(v).domain);
  const auto names = model.ExogenousNames();
  EffectBound out;
  for (const auto& point : EnumerateAssignments(domains)) {
    const ProbabilisticSem psem{model, Dist::PointMass(names, domains, point)};
    MaxOver(q, SinkByValue(psem, q), point, out);
  }
  return out;
}

SequentialComposition ComposeSequential(const Sem& m1, const Sem& m2,
                                        const SequentialInterface& interface) {
  const auto require = [](const Sem& m, const std::string& name, const char* which) {
    auto found = m.Find(name);
    if (!found) {
      throw Error(ErrorKind::kNotInSequence,
                  std::string(which) + " has no variable " + Quote(name));
    }
    return *found;
  };
  const int x1 = require(m1, interface.source, "stage 1");
  const int y1 = require(m1, interface.stage1_output, "stage 1");
  if (x1 == y1) {
    throw Error(ErrorKind::kNotInSequence, "source and stage-1 output coincide");
  }
  if (m1.variable(y1).kind != VariableKind::kEndogenous) {
    throw Error(ErrorKind::kNotInSequence,
                "stage-1 output " + Quote(interface.stage1_output) + " is exogenous");
  }
  if (IsAncestor(m1, y1, x1)) {
    throw Error(ErrorKind::kNotInSequence,
                "stage-1 output " + Quote(interface.stage1_output) +
                    " affects the source " + Quote(interface.source));
  }
  const int x2 = require(m2, interface.source, "stage 2");
  const int y1b = require(m2, interface.stage1_output, "stage 2");
  const int y2 = require(m2, interface.stage2_output, "stage 2");
  if (y2 == x2 || y2 == y1b) {
    throw Error(ErrorKind::kNotInSequence,
                "stage-2 output must differ from the shared variables");
  }
  for (int v : {x2, y1b}) {
    if (m2.variable(v).kind != VariableKind::kExogenous) {
      throw Error(ErrorKind::kNotInSequence,
                  "stage 2 defines an equation for shared variable " +
                      Quote(m2.variable(v).name));
    }
  }
  if (!(m1.variable(x1).domain == m2.variable(x2).domain)) {
    throw Error(ErrorKind::kDomainMismatch,
                "source " + Quote(interface.source) + " has different domains");
  }
  if (!(m1.variable(y1).domain == m2.variable(y1b).domain)) {
    throw Error(ErrorKind::kDomainMismatch,
                "stage-1 output " + Quote(interface.stage1_output) +
                    " has different domains");
  }
  Validate(m1);
  Validate(m2);

  Sem composed = m1;
  for (int v = 0; v < m2.num_variables(); ++v) {
    if (v == x2 || v == y1b) continue;
    const Variable& var = m2.variable(v);
    if (composed.Find(var.name)) {
      throw Error(ErrorKind::kNotInSequence,
                  "variable " + Quote(var.name) + " appears in both stages");
    }
    composed.AddVariable(var.name, var.kind, var.domain);
  }
  for (int v = 0; v < m2.num_variables(); ++v) {
    const auto* eq = m2.EquationFor(v);
    if (eq == nullptr) continue;
    std::vector<std::string> parents;
    for (int p : eq->parents) parents.push_back(m2.variable(p).name);
    composed.SetEquation(m2.variable(v).name, parents, eq->rows);
  }
  Validate(composed);
  return SequentialComposition{m1, m2, interface, std::move(composed)};
}

CompositionReport CheckComposition(const SequentialComposition& composition,
                                   const RatioBound& ratio1,
                                   const RatioBound& ratio2) {
  const auto& io = composition.interface;
  CompositionReport report;
  report.declared1 = ratio1;
  report.declared2 = ratio2;
  report.stage1 = BrpBound(composition.m1, {io.stage1_output}, io.source);
  if (report.stage1.bound > ratio1) {
    throw Error(ErrorKind::kPremiseViolated,
                "stage-1 bound " + report.stage1.bound.ToString() +
                    " exceeds its declared ratio " + ratio1.ToString());
  }
  report.stage2 = BrpBound(composition.m2, {io.stage2_output}, io.source);
  if (report.stage2.bound > ratio2) {
    throw Error(ErrorKind::kPremiseViolated,
                "stage-2 bound " + report.stage2.bound.ToString() +
                    " exceeds its declared ratio " + ratio2.ToString());
  }
  report.composed = BrpBound(composition.composed,
                             {io.stage1_output, io.stage2_output}, io.source);
  report.pass = report.composed.bound <= ratio1 * ratio2;
  return report;
}

}  // namespace dpcausal
