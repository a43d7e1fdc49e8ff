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


// The model file dialect: JSON with a top-level "kind", exact rationals
// written as "p/q" strings and every domain listed in order. Parsing reports
// problems with line and column; serialising is canonical, so parse and
// serialise are inverse on every file this module writes.

#ifndef DPCAUSAL_MODEL_IO_H_
#define DPCAUSAL_MODEL_IO_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "dpcausal/brp.h"
#include "dpcausal/error.h"
#include "dpcausal/mechanisms.h"
#include "dpcausal/rational.h"
#include "dpcausal/sem.h"
#include "json.hpp"

namespace dpcausal {

using OrderedJson = nlohmann::ordered_json;

// A JSON tree plus the source position of every node, keyed by JSON pointer.
struct LocatedJson {
  OrderedJson root;
  std::map<std::string, SourceLocation> locations;
  std::string source;

  // Position of the node at `pointer`, or of its closest recorded ancestor.
  SourceLocation Locate(const std::string& pointer) const;
};

// Parses JSON text, rejecting floating-point literals. Errors: kParse with
// location.
LocatedJson ParseLocatedJson(std::string_view text, std::string source);

// A kernel named by builder and parameters rather than listed.
struct BuiltinMechanism {
  // randomized_response, geometric_count, joint_hidden_value, hidden_value.
  std::string name;
  int n = 1;
  std::optional<Rational> parameter;

  friend bool operator==(const BuiltinMechanism&, const BuiltinMechanism&) = default;
};

MechanismKernel BuildBuiltin(const BuiltinMechanism& spec);

// A population for checks that need one: either a distribution over the data
// points, or attribute equations with a distribution over the exogenous R_i.
struct PopulationSpec {
  std::optional<Dist> points;
  std::vector<AttributeEquation> attribute_equations;
  std::optional<Dist> exogenous;

  friend bool operator==(const PopulationSpec&, const PopulationSpec&) = default;
};

struct MechanismFile {
  std::string name;
  std::string description;
  std::optional<BuiltinMechanism> builtin;
  MechanismKernel kernel;
  std::vector<std::pair<std::string, PopulationSpec>> populations;

  const PopulationSpec* FindPopulation(std::string_view name) const;

  friend bool operator==(const MechanismFile&, const MechanismFile&) = default;
};

struct EffectSpec {
  std::string source;
  std::vector<std::string> sink;

  friend bool operator==(const EffectSpec&, const EffectSpec&) = default;
};

struct SemFile {
  std::string name;
  std::string description;
  Sem model;
  std::optional<Dist> exogenous;
  // Default question for `epsilon`.
  std::optional<EffectSpec> effect;

  friend bool operator==(const SemFile&, const SemFile&) = default;
};

struct CompositionFile {
  std::string name;
  std::string description;
  SemFile stage1;
  SemFile stage2;
  SequentialInterface interface;
  RatioBound declared1;
  RatioBound declared2;

  friend bool operator==(const CompositionFile&, const CompositionFile&) = default;
};

struct DistributionFile {
  std::string name;
  Dist dist;

  friend bool operator==(const DistributionFile&, const DistributionFile&) = default;
};

using ModelFile = std::variant<MechanismFile, SemFile, CompositionFile, DistributionFile>;

// Errors: kParse for malformed JSON or literals, kValidation for anything
// structurally wrong or rejected by the library's invariants. Both carry the
// offending node's location.
ModelFile ParseModel(std::string_view text, const std::string& source);
ModelFile ParseModelFile(const std::string& path);

// Canonical text, two-space indented, newline terminated.
std::string SerializeModel(const ModelFile& file);

OrderedJson DistToJson(const Dist& dist);
OrderedJson SemToJson(const Sem& sem);

// "kind" of a file, e.g. "mechanism".
std::string_view ModelKind(const ModelFile& file);

// "1/2" for "0.5" style text, nullopt when the text is not a decimal.
std::optional<Rational> DecimalToRational(std::string_view text);

}  // namespace dpcausal

#endif  // DPCAUSAL_MODEL_IO_H_
