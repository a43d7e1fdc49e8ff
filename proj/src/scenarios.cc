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


#include "dpcausal/scenarios.h"

#include <algorithm>

#include "dpcausal/mechanisms.h"

namespace dpcausal {
namespace {

const FiniteDomain& Answers() {
  static const FiniteDomain domain({"pos", "neg", "null"});
  return domain;
}

const FiniteDomain& Digits3() {
  static const FiniteDomain domain({"0", "1", "2"});
  return domain;
}

std::vector<std::vector<Rational>> Identity(int size) {
  std::vector<std::vector<Rational>> rows(size, std::vector<Rational>(size, Rational(0)));
  for (int k = 0; k < size; ++k) rows[k][k] = 1;
  return rows;
}

PopulationSpec UniformPoints(const MechanismKernel& kernel) {
  std::vector<std::string> names;
  for (int i = 0; i < kernel.n(); ++i) names.push_back(DataPointName(i));
  return PopulationSpec{
      Dist::Uniform(names, std::vector<FiniteDomain>(kernel.n(), kernel.data_domain())), {},
      std::nullopt};
}

// Uniform over the values other than "2" at every coordinate.
PopulationSpec HideTwo(int n) {
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back(DataPointName(i));
  const std::vector<FiniteDomain> domains(n, Digits3());
  std::map<Assignment, Rational> weights;
  for (const auto& d : EnumerateAssignments(domains)) {
    if (std::find(d.begin(), d.end(), 2) == d.end()) weights.emplace(d, Rational(1, 1 << n));
  }
  return PopulationSpec{Dist(names, domains, weights), {}, std::nullopt};
}

MechanismFile FromBuiltin(std::string name, std::string description, BuiltinMechanism spec) {
  const MechanismKernel kernel = BuildBuiltin(spec);
  return MechanismFile{std::move(name), std::move(description), std::move(spec), kernel, {}};
}

ModelFile AdaByron() {
  MechanismFile file = FromBuiltin(
      "ada_byron",
      "Ada and her son Byron: a noisy count over two data points whose "
      "attributes are perfectly correlated through R_2 := R_1.",
      {"geometric_count", 2, Rational(1, 2)});
  PopulationSpec correlated;
  correlated.attribute_equations = {{"R_2", {"R_1"}, Identity(3)}};
  correlated.exogenous =
      Dist({"R_1"}, {Answers()}, {{{0}, Rational(1, 2)}, {{1}, Rational(1, 2)}});
  file.populations.emplace_back("correlated", std::move(correlated));
  file.populations.emplace_back("uniform", UniformPoints(file.kernel));
  return file;
}

ModelFile ProgramA() {
  MechanismFile file = FromBuiltin(
      "prog_a_n3",
      "A noisy count over three people where the second copies the first's "
      "status and the third is independent.",
      {"geometric_count", 3, Rational(1, 2)});
  PopulationSpec status;
  status.attribute_equations = {{"R_2", {"R_1"}, Identity(3)}};
  std::map<Assignment, Rational> weights;
  for (int a : {0, 1}) {
    for (int b : {0, 1}) weights.emplace(Assignment{a, b}, Rational(1, 4));
  }
  status.exogenous = Dist({"R_1", "R_3"}, {Answers(), Answers()}, weights);
  file.populations.emplace_back("status", std::move(status));
  file.populations.emplace_back("uniform", UniformPoints(file.kernel));
  return file;
}

ModelFile GeometricN3() {
  return FromBuiltin("geometric_n3_r1-2",
                     "Two-sided geometric noise (ratio 1/2) on a count over three data points.",
                     {"geometric_count", 3, Rational(1, 2)});
}

ModelFile RandomizedResponse() {
  MechanismFile file = FromBuiltin(
      "randomized_response",
      "Two respondents each answer truthfully with probability 2/3.",
      {"randomized_response", 2, Rational(2, 3)});
  file.populations.emplace_back("uniform", UniformPoints(file.kernel));
  return file;
}

ModelFile Prop7() {
  MechanismFile file = FromBuiltin(
      "prop7_counterexample",
      "Outputs 0 with certainty on (2,2) and a fair coin elsewhere. Under a "
      "population that never holds the value 2, single-point interventions "
      "cannot see the difference, but neighbouring databases can.",
      {"joint_hidden_value", 2, std::nullopt});
  file.populations.emplace_back("hide2", HideTwo(2));
  file.populations.emplace_back("uniform", UniformPoints(file.kernel));
  return file;
}

ModelFile AppendixA() {
  MechanismFile file = FromBuiltin(
      "appendixA_counterexample",
      "One data point; the value 2 forces output 0. A population without the "
      "value 2 satisfies the strong adversary definition at ratio 1 while the "
      "classic ratio is infinite.",
      {"hidden_value", 1, std::nullopt});
  file.populations.emplace_back("hide2", HideTwo(1));
  file.populations.emplace_back("uniform", UniformPoints(file.kernel));
  return file;
}

ModelFile ConstantN2() {
  const MechanismKernel kernel =
      ConstantKernel(2, Answers(), "null", FiniteDomain({"yes", "no"}),
                     {Rational(1, 4), Rational(3, 4)});
  MechanismFile file{"constant_n2", "Ignores its input entirely.", std::nullopt, kernel, {}};
  file.populations.emplace_back("uniform", UniformPoints(kernel));
  return file;
}

// Clamped geometric noise (ratio r) around x over {0, 1, 2}.
std::vector<std::vector<Rational>> GeometricTable(const Rational& r) {
  std::vector<std::vector<Rational>> rows;
  const Rational inner = (1 - r) / (1 + r);
  for (int x = 0; x < 3; ++x) {
    std::vector<Rational> row(3);
    for (int j = 0; j < 3; ++j) {
      Rational p = 1;
      const int steps = j == 0 ? x : j == 2 ? 2 - x : (j > x ? j - x : x - j);
      for (int k = 0; k < steps; ++k) p *= r;
      row[j] = (j == 0 || j == 2) ? Rational(p / (1 + r)) : Rational(inner * p);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

ModelFile CompositionDemo() {
  CompositionFile file;
  file.name = "composition_demo";
  file.description =
      "A noisy release of X followed by a second release reading both X and "
      "the first output.";
  Sem m1;
  m1.AddVariable("X", VariableKind::kExogenous, Digits3());
  m1.AddVariable("Y1", VariableKind::kEndogenous, Digits3());
  m1.SetEquation("Y1", {"X"}, GeometricTable(Rational(1, 2)));
  file.stage1.name = "release";
  file.stage1.model = m1;
  file.stage1.effect = EffectSpec{"X", {"Y1"}};

  std::vector<std::vector<Rational>> hi;
  for (int x = 0; x < 3; ++x) {
    for (int y = 0; y < 3; ++y) {
      const Rational p(1 + (x >= 1) + (y >= 1), 4);
      hi.push_back({Rational(1 - p), p});
    }
  }
  Sem m2;
  m2.AddVariable("X", VariableKind::kExogenous, Digits3());
  m2.AddVariable("Y1", VariableKind::kExogenous, Digits3());
  m2.AddVariable("Y2", VariableKind::kEndogenous, FiniteDomain({"lo", "hi"}));
  m2.SetEquation("Y2", {"X", "Y1"}, hi);
  file.stage2.name = "follow_up";
  file.stage2.model = m2;
  file.stage2.effect = EffectSpec{"X", {"Y2"}};
  file.interface = SequentialInterface{"X", "Y1", "Y2"};
  file.declared1 = RatioBound(Rational(4));
  file.declared2 = RatioBound(Rational(2));
  return file;
}

ModelFile RandomizedResponseStage() {
  SemFile file;
  file.name = "randomized_response_stage";
  file.description = "A single randomized-response answer Y about a secret X.";
  file.model.AddVariable("X", VariableKind::kExogenous, FiniteDomain({"pos", "neg"}));
  file.model.AddVariable("Y", VariableKind::kEndogenous, FiniteDomain({"pos", "neg"}));
  file.model.SetEquation("Y", {"X"},
                         {{Rational(2, 3), Rational(1, 3)}, {Rational(1, 3), Rational(2, 3)}});
  file.exogenous = Dist::Uniform({"X"}, {FiniteDomain({"pos", "neg"})});
  file.effect = EffectSpec{"X", {"Y"}};
  return file;
}

}  // namespace

const std::vector<Scenario>& Scenarios() {
  static const std::vector<Scenario> kScenarios = {
      {"ada_byron", {"ada-byron"}, "correlated count over two data points", &AdaByron},
      {"prog_a_n3", {}, "count over three data points with a copied status", &ProgramA},
      {"geometric_n3_r1-2", {}, "geometric count, n = 3, ratio 1/2", &GeometricN3},
      {"randomized_response", {}, "randomized response, n = 2, truth bias 2/3",
       &RandomizedResponse},
      {"prop7_counterexample", {"prop7"}, "passes single-point intervention, fails classic",
       &Prop7},
      {"appendixA_counterexample", {"appendixA"},
       "passes strong adversary under one population, fails classic", &AppendixA},
      {"constant_n2", {"constant"}, "constant output distribution", &ConstantN2},
      {"composition_demo", {}, "two-stage sequential composition", &CompositionDemo},
      {"randomized_response_stage", {}, "one randomized-response answer as a model",
       &RandomizedResponseStage},
  };
  return kScenarios;
}

const Scenario* FindScenario(std::string_view name) {
  for (const Scenario& s : Scenarios()) {
    if (s.name == name) return &s;
    for (const std::string& alias : s.aliases) {
      if (alias == name) return &s;
    }
  }
  return nullptr;
}

}  // namespace dpcausal
