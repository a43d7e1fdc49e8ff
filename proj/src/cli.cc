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


#include "dpcausal/cli.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "dpcausal/adversary.h"
#include "dpcausal/brp.h"
#include "dpcausal/dp_checkers.h"
#include "dpcausal/error.h"
#include "dpcausal/mechanisms.h"
#include "dpcausal/report.h"
#include "dpcausal/scenarios.h"

namespace dpcausal {
namespace {

namespace fs = std::filesystem;

int ExitCodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kZeroEvidence:
    case ErrorKind::kZeroProbabilityEvent:
    case ErrorKind::kNotAProductDistribution:
      return kExitDegenerate;
    case ErrorKind::kPremiseViolated:
      return kExitFail;
    default:
      return kExitInvalid;
  }
}

[[noreturn]] void Usage(const std::string& message) {
  throw Error(ErrorKind::kInvalidArgument, message);
}

std::string ReadText(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Usage("cannot read \"" + path + "\"");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteText(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) Usage("cannot write \"" + path + "\"");
  out << text;
}

RatioBound ParseRatioArgument(const std::string& text) {
  try {
    return RatioBound::Parse(text);
  } catch (const Error&) {
    std::string hint;
    if (auto exact = DecimalToRational(text)) hint = "; write \"" + FormatRational(*exact) + "\"";
    throw Error(ErrorKind::kParse,
                "ratio must be written as integer/integer or \"inf\", got \"" + text + "\"" + hint);
  }
}

const MechanismFile& RequireMechanism(const ResolvedInput& input) {
  const auto* m = std::get_if<MechanismFile>(&input.file);
  if (m == nullptr) {
    Usage("\"" + input.label + "\" is a " + std::string(ModelKind(input.file)) +
          " file; this command needs a mechanism file");
  }
  return *m;
}

struct NamedPopulation {
  std::string label;
  PopulationSpec spec;
};

// A population named in the mechanism file, or a distribution file.
NamedPopulation ResolvePopulation(const MechanismFile& file, const std::string& argument) {
  if (const PopulationSpec* spec = file.FindPopulation(argument)) {
    return NamedPopulation{argument, *spec};
  }
  for (const std::string& path : {argument, argument + ".json"}) {
    if (fs::is_regular_file(path)) {
      ModelFile parsed = ParseModelFile(path);
      auto* dist = std::get_if<DistributionFile>(&parsed);
      if (dist == nullptr) Usage("population file \"" + path + "\" is not a distribution file");
      return NamedPopulation{argument, PopulationSpec{dist->dist, {}, std::nullopt}};
    }
  }
  std::string known;
  for (const auto& [name, spec] : file.populations) known += (known.empty() ? "" : ", ") + name;
  throw Error(ErrorKind::kValidation, "unknown population \"" + argument + "\"" +
                                          (known.empty() ? "" : " (file defines: " + known + ")"));
}

CheckReport RunWithPopulation(DefinitionId definition, const MechanismKernel& kernel,
                              const NamedPopulation* pop, const RatioBound& target) {
  CheckOptions options;
  if (pop == nullptr) return RunCheck(definition, kernel, std::nullopt, target, options);
  options.population_label = pop->label;
  if (pop->spec.points) return RunCheck(definition, kernel, *pop->spec.points, target, options);
  switch (definition) {
    case DefinitionId::kWholeDbIntervention:
    case DefinitionId::kSinglePointIntervention:
      return CheckCausal(definition, kernel, pop->spec.attribute_equations, *pop->spec.exogenous,
                         target, options);
    default:
      return CheckAssociative(definition, kernel, pop->spec.attribute_equations,
                              *pop->spec.exogenous, target, options);
  }
}

ProbabilisticSem CanonicalFor(const MechanismKernel& kernel, const PopulationSpec& spec) {
  if (spec.points) return BuildCanonicalModel(kernel, *spec.points);
  return BuildCanonicalModel(kernel, spec.attribute_equations, *spec.exogenous);
}

// --- report entries -----------------------------------------------------------

OrderedJson EpsilonEntry(const MechanismKernel& kernel) {
  const ClassicResult classic = ComputeClassicEpsilon(kernel);
  OrderedJson e;
  e["type"] = "epsilon";
  e["ratio"] = classic.ratio.ToString();
  e["epsilon"] = classic.ratio.EpsilonString();
  if (classic.witness) {
    const NeighborWitness& w = *classic.witness;
    e["witness"] = OrderedJson{
        {"coordinate", DataPointName(w.coordinate)},
        {"database", kernel.DatabaseLabel(w.database)},
        {"neighbour", kernel.DatabaseLabel(WithCoordinate(w.database, w.coordinate, w.alternative))},
        {"output", kernel.output_domain().value(w.output)}};
  } else {
    e["witness"] = nullptr;
  }
  return e;
}

OrderedJson BrpEntry(const Sem& model, const std::vector<std::string>& sink,
                     const std::string& source, const std::optional<Dist>& exogenous) {
  OrderedJson e;
  e["type"] = "brp";
  e["source"] = source;
  e["sink"] = sink;
  e.update(EffectBoundToJson(BrpBound(model, sink, source), model, sink, source));
  if (exogenous) {
    const EffectBound under =
        MaxRelativeProbability(MakeProbabilisticSem(model, *exogenous), sink, source);
    e["under_exogenous"] = under.bound.ToString();
  }
  return e;
}

OrderedJson CheckEntry(const CheckReport& report, const MechanismKernel& kernel,
                       const NamedPopulation* pop) {
  OrderedJson e = CheckReportToJson(report, kernel);
  OrderedJson out;
  out["type"] = "check";
  out["definition"] = e["definition"];
  out["population"] = pop == nullptr ? OrderedJson(nullptr) : OrderedJson(pop->label);
  for (const auto& item : e.items()) {
    if (item.key() != "type" && item.key() != "definition") out[item.key()] = item.value();
  }
  return out;
}

OrderedJson ComposeEntry(const CompositionFile& file, bool* pass) {
  const SequentialComposition composition =
      ComposeSequential(file.stage1.model, file.stage2.model, file.interface);
  const auto& io = file.interface;
  OrderedJson e;
  e["type"] = "compose";
  e["interface"] = OrderedJson{{"source", io.source},
                               {"stage1_output", io.stage1_output},
                               {"stage2_output", io.stage2_output}};
  e["declared_ratios"] = OrderedJson::array({file.declared1.ToString(), file.declared2.ToString()});
  try {
    const CompositionReport report =
        CheckComposition(composition, file.declared1, file.declared2);
    e["stage1"] = EffectBoundToJson(report.stage1, composition.m1, {io.stage1_output}, io.source);
    e["stage2"] = EffectBoundToJson(report.stage2, composition.m2, {io.stage2_output}, io.source);
    e["composed"] = EffectBoundToJson(report.composed, composition.composed,
                                      {io.stage1_output, io.stage2_output}, io.source);
    e["product"] = (report.declared1 * report.declared2).ToString();
    e["pass"] = report.pass;
    *pass = report.pass;
  } catch (const Error& error) {
    if (error.kind() != ErrorKind::kPremiseViolated) throw;
    e["premise_violated"] = error.what();
    e["pass"] = false;
    *pass = false;
  }
  return e;
}

OrderedJson DistributionFileJson(const std::string& name, const Dist& dist) {
  return OrderedJson::parse(SerializeModel(DistributionFile{name, dist}));
}

std::vector<OrderedJson> RunAllFor(const ModelFile& file) {
  std::vector<OrderedJson> entries;
  if (const auto* m = std::get_if<MechanismFile>(&file)) {
    const MechanismKernel& kernel = m->kernel;
    entries.push_back(EpsilonEntry(kernel));
    const RatioBound classic = ComputeClassicEpsilon(kernel).ratio;
    const RatioBound target = classic.is_infinite() ? RatioBound() : classic;
    for (DefinitionId def : AllDefinitions()) {
      if (!NeedsPopulation(def)) {
        entries.push_back(CheckEntry(RunWithPopulation(def, kernel, nullptr, target), kernel, nullptr));
        continue;
      }
      for (const auto& [name, spec] : m->populations) {
        const NamedPopulation pop{name, spec};
        try {
          entries.push_back(CheckEntry(RunWithPopulation(def, kernel, &pop, target), kernel, &pop));
        } catch (const Error& error) {
          if (error.kind() != ErrorKind::kNotAProductDistribution) throw;
          entries.push_back(OrderedJson{{"type", "check"},
                                        {"definition", DefinitionName(def)},
                                        {"population", name},
                                        {"not_applicable", error.what()}});
        }
      }
    }
    const Sem canonical = BuildCanonicalSem(kernel);
    for (int i = 0; i < kernel.n(); ++i) {
      entries.push_back(BrpEntry(canonical, {kOutputName}, AttributeName(i), std::nullopt));
    }
  } else if (const auto* s = std::get_if<SemFile>(&file)) {
    if (s->effect) entries.push_back(BrpEntry(s->model, s->effect->sink, s->effect->source, s->exogenous));
  } else if (const auto* c = std::get_if<CompositionFile>(&file)) {
    bool pass = true;
    entries.push_back(ComposeEntry(*c, &pass));
  }
  return entries;
}

// --- text rendering --------------------------------------------------------------

std::string Str(const OrderedJson& j) {
  return j.is_string() ? j.get<std::string>() : j.dump();
}

void RenderEntry(const OrderedJson& e, std::ostream& out) {
  const std::string prefix = e.contains("scenario") ? Str(e["scenario"]) + ": " : "";
  const std::string type = Str(e["type"]);
  if (type == "epsilon") {
    out << prefix << "classic ratio " << Str(e["ratio"]) << " (epsilon " << Str(e["epsilon"])
        << ")\n";
    if (!e["witness"].is_null()) {
      const auto& w = e["witness"];
      out << "  witness: " << Str(w["database"]) << " vs " << Str(w["neighbour"]) << " at output "
          << Str(w["output"]) << "\n";
    }
  } else if (type == "brp") {
    std::string sink;
    for (const auto& v : e["sink"]) sink += (sink.empty() ? "" : ",") + Str(v);
    out << prefix << "brp(" << sink << " <- " << Str(e["source"]) << ") = " << Str(e["bound"])
        << " (epsilon " << Str(e["epsilon"]) << ")";
    if (e.contains("under_exogenous")) out << "; under the given exogenous distribution " << Str(e["under_exogenous"]);
    out << "\n";
  } else if (type == "check") {
    out << prefix << Str(e["definition"]);
    if (!e["population"].is_null()) out << " [population " << Str(e["population"]) << "]";
    if (e.contains("not_applicable")) {
      out << ": not applicable (" << Str(e["not_applicable"]) << ")\n";
      return;
    }
    out << ": achieved " << Str(e["achieved_ratio"]) << " (epsilon " << Str(e["epsilon"])
        << ") against target " << Str(e["target_ratio"]) << ": "
        << (e["pass"].get<bool>() ? "PASS" : "FAIL") << "\n";
    if (!e["witness"].is_null()) {
      const auto& w = e["witness"];
      out << "  witness: " << Str(w["coordinate"]) << " = " << Str(w["value"]) << " vs "
          << Str(w["alternative"]);
      if (w.contains("database")) out << " in " << Str(w["database"]);
      out << " at output " << Str(w["output"]);
      if (!Str(w["population"]).empty()) out << " under " << Str(w["population"]);
      out << "\n";
    }
    for (const auto& note : e["notes"]) out << "  note: " << Str(note) << "\n";
  } else if (type == "falsify") {
    if (e["found"].get<bool>()) {
      out << prefix << "falsified " << Str(e["definition"]) << " at " << Str(e["target_ratio"])
          << ": achieved " << Str(e["check"]["achieved_ratio"]) << " (family: " << Str(e["family"])
          << ", " << e["candidates_examined"].get<long>() << " candidates)\n";
    } else {
      out << prefix << "no counterexample found for " << Str(e["definition"]) << " at "
          << Str(e["target_ratio"]) << " (" << e["candidates_examined"].get<long>()
          << " candidates, budget " << e["budget"].get<int>() << ")\n";
    }
  } else if (type == "posterior") {
    out << prefix << "posterior given O = " << Str(e["output"]);
    if (!e["intervention"].is_null()) {
      out << ", do(" << Str(e["intervention"]["coordinate"]) << " = "
          << Str(e["intervention"]["value"]) << ")";
    }
    out << "\n";
    for (const auto& row : e["posterior"]) {
      out << "  " << Str(row["database"]) << "  " << Str(row["credence"]) << "\n";
    }
  } else if (type == "compose") {
    if (e.contains("premise_violated")) {
      out << prefix << "composition premise violated: " << Str(e["premise_violated"]) << "\n";
      return;
    }
    out << prefix << "stage 1 bound " << Str(e["stage1"]["bound"]) << " (declared "
        << Str(e["declared_ratios"][0]) << "), stage 2 bound " << Str(e["stage2"]["bound"])
        << " (declared " << Str(e["declared_ratios"][1]) << ")\n";
    out << "  composed bound " << Str(e["composed"]["bound"]) << " <= " << Str(e["product"])
        << ": " << (e["pass"].get<bool>() ? "PASS" : "FAIL") << "\n";
  } else if (type == "replay") {
    out << prefix << "entry " << e["entry"].get<int>() << " (" << Str(e["entry_type"])
        << "): " << Str(e["status"]);
    if (e.contains("detail")) out << " (" << Str(e["detail"]) << ")";
    out << "\n";
  }
}

// --- commands ------------------------------------------------------------------------

struct Outcome {
  ReportFile report;
  int exit_code = kExitPass;
};

ReportFile NewReport(const std::string& command, const ResolvedInput& input) {
  ReportFile report;
  report.command = command;
  report.input = input.label;
  report.input_digest = InputDigest(input.file);
  return report;
}

Outcome CmdEpsilon(const std::string& argument, const std::string& source,
                   const std::vector<std::string>& sink) {
  const ResolvedInput input = ResolveInput(argument);
  Outcome outcome{NewReport("epsilon", input)};
  if (const auto* m = std::get_if<MechanismFile>(&input.file)) {
    if (source.empty() != sink.empty()) Usage("--source and --sink go together");
    if (source.empty()) {
      outcome.report.entries.push_back(EpsilonEntry(m->kernel));
    } else {
      outcome.report.entries.push_back(
          BrpEntry(BuildCanonicalSem(m->kernel), sink, source, std::nullopt));
    }
  } else if (const auto* s = std::get_if<SemFile>(&input.file)) {
    std::string x = source;
    std::vector<std::string> y = sink;
    if (x.empty() && s->effect) {
      x = s->effect->source;
      y = s->effect->sink;
    }
    if (x.empty() || y.empty()) Usage("a model file needs --source and --sink or an \"effect\" field");
    outcome.report.entries.push_back(BrpEntry(s->model, y, x, s->exogenous));
  } else {
    Usage("epsilon takes a mechanism or sem file; use `compose` for compositions");
  }
  return outcome;
}

Outcome CmdCheck(const std::string& definition_name, const std::string& argument,
                 const std::string& target_text, const std::optional<std::string>& pop_argument) {
  const DefinitionId definition = ParseDefinition(definition_name);
  const RatioBound target = ParseRatioArgument(target_text);
  const ResolvedInput input = ResolveInput(argument);
  const MechanismFile& file = RequireMechanism(input);
  if (NeedsPopulation(definition) && !pop_argument) {
    throw Error(ErrorKind::kMissingPopulation,
                std::string(DefinitionName(definition)) + " is evaluated under a population; pass --pop");
  }
  if (!NeedsPopulation(definition) && pop_argument) {
    throw Error(ErrorKind::kUnexpectedPopulation,
                std::string(DefinitionName(definition)) +
                    " quantifies over every population and takes no --pop");
  }
  Outcome outcome{NewReport("check", input)};
  std::optional<NamedPopulation> pop;
  if (pop_argument) pop = ResolvePopulation(file, *pop_argument);
  const CheckReport report =
      RunWithPopulation(definition, file.kernel, pop ? &*pop : nullptr, target);
  OrderedJson entry = CheckEntry(report, file.kernel, pop ? &*pop : nullptr);
  if (pop && !file.FindPopulation(pop->label)) {
    // Populations from separate files travel inside the report.
    entry["population_distribution"] = DistributionFileJson(pop->label, *pop->spec.points);
  }
  outcome.report.entries.push_back(std::move(entry));
  outcome.exit_code = report.pass ? kExitPass : kExitFail;
  return outcome;
}

Outcome CmdFalsify(const std::string& definition_name, const std::string& argument,
                   const std::string& target_text, int budget, const std::string& witness_out) {
  if (ParseDefinition(definition_name) != DefinitionId::kBayesian0) {
    Usage("falsify supports bayesian0 only");
  }
  const RatioBound target = ParseRatioArgument(target_text);
  const ResolvedInput input = ResolveInput(argument);
  const MechanismFile& file = RequireMechanism(input);
  const FalsificationResult result = FalsifyBayesian0(file.kernel, target, budget);
  Outcome outcome{NewReport("falsify", input)};
  OrderedJson e;
  e["type"] = "falsify";
  e["definition"] = "bayesian0";
  e["target_ratio"] = target.ToString();
  e["budget"] = budget;
  e["found"] = result.found;
  e["family"] = result.family;
  e["candidates_examined"] = result.candidates_examined;
  if (result.found) {
    e["witness_population"] = DistributionFileJson("falsified", *result.population);
    const NamedPopulation pop{"falsified", PopulationSpec{*result.population, {}, std::nullopt}};
    e["check"] = CheckEntry(*result.report, file.kernel, &pop);
    if (!witness_out.empty()) {
      WriteText(witness_out, SerializeModel(DistributionFile{"falsified", *result.population}));
    }
  } else {
    e["witness_population"] = nullptr;
    e["check"] = nullptr;
  }
  outcome.report.entries.push_back(std::move(e));
  outcome.exit_code = result.found ? kExitPass : kExitNotFound;
  return outcome;
}

Outcome CmdPosterior(const std::string& kernel_argument, const std::string& prior_argument,
                     const std::string& output, const std::string& intervene) {
  const ResolvedInput input = ResolveInput(kernel_argument);
  const MechanismFile& file = RequireMechanism(input);
  const MechanismKernel& kernel = file.kernel;
  const NamedPopulation prior_pop = ResolvePopulation(file, prior_argument);
  if (!prior_pop.spec.points) {
    Usage("the prior must be a distribution over the data points");
  }
  const Prior prior(kernel, *prior_pop.spec.points);
  const auto o = kernel.output_domain().Find(output);
  if (!o) {
    throw Error(ErrorKind::kValueOutOfDomain, "output \"" + output + "\" is not an output of the kernel");
  }
  OrderedJson e;
  e["type"] = "posterior";
  e["prior"] = prior_pop.label;
  e["output"] = output;
  std::optional<Dist> posterior;
  if (intervene.empty()) {
    e["intervention"] = nullptr;
    posterior = Posterior(kernel, prior, *o);
  } else {
    const auto eq = intervene.find('=');
    if (eq == std::string::npos) Usage("--intervene takes i=value or D_i=value");
    std::string point = intervene.substr(0, eq);
    const std::string value = intervene.substr(eq + 1);
    if (point.rfind("D_", 0) == 0) point = point.substr(2);
    int coordinate = -1;
    try {
      std::size_t used = 0;
      coordinate = std::stoi(point, &used) - 1;
      if (used != point.size()) coordinate = -1;
    } catch (const std::exception&) {
      coordinate = -1;
    }
    if (coordinate < 0 || coordinate >= kernel.n()) {
      Usage("--intervene names data point \"" + intervene.substr(0, eq) + "\", which does not exist");
    }
    const int alternative = kernel.data_domain().IndexOf(value);
    e["intervention"] = OrderedJson{{"coordinate", DataPointName(coordinate)}, {"value", value}};
    posterior = PosteriorUnderIntervention(kernel, prior, *o, coordinate, alternative);
  }
  OrderedJson table = OrderedJson::array();
  for (int k = 0; k < kernel.num_databases(); ++k) {
    const Database d = kernel.DatabaseAt(k);
    table.push_back(OrderedJson{{"database", kernel.DatabaseLabel(d)},
                                {"credence", FormatRational(posterior->Weight(d))}});
  }
  e["posterior"] = std::move(table);
  Outcome outcome{NewReport("posterior", input)};
  outcome.report.entries.push_back(std::move(e));
  return outcome;
}

Outcome CmdCompose(const std::string& argument) {
  const ResolvedInput input = ResolveInput(argument);
  const auto* file = std::get_if<CompositionFile>(&input.file);
  if (file == nullptr) Usage("compose takes a composition file");
  Outcome outcome{NewReport("compose", input)};
  bool pass = true;
  outcome.report.entries.push_back(ComposeEntry(*file, &pass));
  outcome.exit_code = pass ? kExitPass : kExitFail;
  return outcome;
}

Outcome CmdRunAll() {
  Outcome outcome;
  outcome.report.command = "scenarios run-all";
  outcome.report.input = "scenarios";
  std::string digests;
  for (const Scenario& scenario : Scenarios()) {
    const ModelFile file = scenario.build();
    const std::string digest = InputDigest(file);
    digests += digest + "\n";
    for (OrderedJson& entry : RunAllFor(file)) {
      OrderedJson tagged;
      tagged["scenario"] = scenario.name;
      tagged["input_digest"] = digest;
      tagged.update(entry);
      outcome.report.entries.push_back(std::move(tagged));
    }
  }
  outcome.report.input_digest = "sha256:" + Sha256Hex(digests);
  return outcome;
}

// An entry minus the tags `scenarios run-all` adds.
OrderedJson WithoutTags(OrderedJson entry) {
  entry.erase("scenario");
  entry.erase("input_digest");
  return entry;
}

// Re-derives one entry; returns a status and optional detail.
std::pair<std::string, std::string> ReplayEntry(const OrderedJson& e, const ResolvedInput& input) {
  const std::string type = Str(e.at("type"));
  if (type == "check" || type == "falsify") {
    const MechanismFile& file = RequireMechanism(input);
    const MechanismKernel& kernel = file.kernel;
    if (e.contains("not_applicable")) return {"skipped", "not applicable"};
    if (type == "falsify" && !e.at("found").get<bool>()) return {"skipped", "nothing was found"};
    const OrderedJson& check = type == "check" ? e : e.at("check");
    const CheckReport report = CheckReportFromJson(check, kernel);
    std::optional<ProbabilisticSem> canonical;
    std::optional<PopulationSpec> spec;
    const OrderedJson* embedded = nullptr;
    if (type == "falsify") embedded = &e.at("witness_population");
    if (check.contains("population_distribution")) embedded = &check.at("population_distribution");
    if (embedded != nullptr) {
      const ModelFile parsed = ParseModel(embedded->dump(), "<embedded population>");
      const auto* dist = std::get_if<DistributionFile>(&parsed);
      if (dist == nullptr) throw Error(ErrorKind::kValidation, "embedded population is not a distribution");
      spec = PopulationSpec{dist->dist, {}, std::nullopt};
    } else if (!check.at("population").is_null()) {
      const std::string label = Str(check.at("population"));
      const PopulationSpec* found = file.FindPopulation(label);
      if (found == nullptr) return {"mismatch", "population \"" + label + "\" is not in the input"};
      spec = *found;
    }
    if (spec) canonical = CanonicalFor(kernel, *spec);
    // The full check must reproduce the recorded result exactly ...
    std::optional<NamedPopulation> pop;
    if (spec) pop = NamedPopulation{Str(check.at("population")), *spec};
    const CheckReport rerun =
        RunWithPopulation(report.definition, kernel, pop ? &*pop : nullptr, report.target_ratio);
    if (!(rerun.achieved == report.achieved) || rerun.pass != report.pass) {
      return {"mismatch", "re-running the check gives " + rerun.achieved.ToString()};
    }
    // ... and the witness must reach it through plain queries.
    const auto replayed = ReplayWitness(report, kernel, canonical);
    if (!replayed) {
      return report.achieved == RatioBound() ? std::pair<std::string, std::string>{"reproduced", "no witness, ratio 1/1"}
                                             : std::pair<std::string, std::string>{"mismatch", "witness missing"};
    }
    if (!(*replayed == report.achieved)) {
      return {"mismatch", "witness replays to " + replayed->ToString()};
    }
    return {"reproduced", "witness ratio " + replayed->ToString()};
  }
  if (type == "epsilon") {
    const MechanismKernel& kernel = RequireMechanism(input).kernel;
    const OrderedJson fresh = EpsilonEntry(kernel);
    if (fresh != WithoutTags(e)) return {"mismatch", "classic ratio is now " + Str(fresh["ratio"])};
    if (e.at("witness").is_null()) return {"reproduced", "ratio 1/1"};
    CheckReport report;
    report.definition = DefinitionId::kClassic;
    report.achieved = RatioBound::Parse(Str(e.at("ratio")));
    const auto& w = e.at("witness");
    CheckWitness witness;
    for (int i = 0; i < kernel.n(); ++i) {
      if (DataPointName(i) == Str(w.at("coordinate"))) witness.coordinate = i;
    }
    for (int k = 0; k < kernel.num_databases(); ++k) {
      const Database d = kernel.DatabaseAt(k);
      if (kernel.DatabaseLabel(d) == Str(w.at("database"))) witness.database = d;
    }
    if (!witness.database) return {"mismatch", "unknown witness database"};
    witness.value = (*witness.database)[witness.coordinate];
    for (int k = 0; k < kernel.num_databases(); ++k) {
      const Database d = kernel.DatabaseAt(k);
      if (kernel.DatabaseLabel(d) == Str(w.at("neighbour"))) witness.alternative = d[witness.coordinate];
    }
    witness.output = kernel.output_domain().IndexOf(Str(w.at("output")));
    report.witness = witness;
    const auto replayed = ReplayWitness(report, kernel, std::nullopt);
    if (!replayed || !(*replayed == report.achieved)) return {"mismatch", "witness does not replay"};
    return {"reproduced", "witness ratio " + replayed->ToString()};
  }
  if (type == "brp" || type == "compose") {
    OrderedJson fresh;
    if (type == "compose") {
      const auto* file = std::get_if<CompositionFile>(&input.file);
      if (file == nullptr) return {"mismatch", "input is not a composition file"};
      bool pass = true;
      fresh = ComposeEntry(*file, &pass);
    } else {
      std::vector<std::string> sink = e.at("sink").get<std::vector<std::string>>();
      const std::string source = Str(e.at("source"));
      if (const auto* m = std::get_if<MechanismFile>(&input.file)) {
        fresh = BrpEntry(BuildCanonicalSem(m->kernel), sink, source, std::nullopt);
      } else if (const auto* s = std::get_if<SemFile>(&input.file)) {
        fresh = BrpEntry(s->model, sink, source, s->exogenous);
      } else {
        return {"mismatch", "input has no model"};
      }
    }
    if (fresh != WithoutTags(e)) return {"mismatch", "recomputation differs"};
    return {"reproduced", ""};
  }
  return {"skipped", "nothing to replay"};
}

Outcome CmdReplay(const std::string& report_path, const std::optional<std::string>& input_argument) {
  const std::string text = ReadText(report_path);
  const ReportFile recorded = ParseReport(text, report_path);
  Outcome outcome;
  outcome.report.command = "replay";
  outcome.report.input = report_path;
  outcome.report.input_digest = "sha256:" + Sha256Hex(text);
  std::map<std::string, ResolvedInput> inputs;
  auto input_for = [&](const std::string& argument) -> const ResolvedInput& {
    auto it = inputs.find(argument);
    if (it == inputs.end()) it = inputs.emplace(argument, ResolveInput(argument)).first;
    return it->second;
  };
  bool ok = true;
  for (std::size_t k = 0; k < recorded.entries.size(); ++k) {
    const OrderedJson& e = recorded.entries[k];
    OrderedJson result;
    result["type"] = "replay";
    result["entry"] = static_cast<int>(k);
    result["entry_type"] = e.contains("type") ? e.at("type") : OrderedJson("?");
    if (e.contains("scenario")) result["scenario"] = e.at("scenario");
    const std::string argument = e.contains("scenario") ? Str(e.at("scenario"))
                                 : input_argument       ? *input_argument
                                                        : recorded.input;
    const ResolvedInput& input = input_for(argument);
    const std::string expected =
        e.contains("input_digest") ? Str(e.at("input_digest")) : recorded.input_digest;
    std::pair<std::string, std::string> status;
    if (InputDigest(input.file) != expected) {
      status = {"digest_mismatch", "the input differs from the one the report was made from"};
    } else {
      status = ReplayEntry(e, input);
    }
    result["status"] = status.first;
    if (!status.second.empty()) result["detail"] = status.second;
    if (status.first != "reproduced" && status.first != "skipped") ok = false;
    outcome.report.entries.push_back(std::move(result));
  }
  outcome.exit_code = ok ? kExitPass : kExitFail;
  return outcome;
}

void Emit(const Outcome& outcome, const std::string& format, const std::string& report_path,
          std::ostream& out) {
  const std::string json = SerializeReport(outcome.report);
  if (!report_path.empty()) WriteText(report_path, json);
  if (format == "json") {
    out << json;
  } else {
    for (const OrderedJson& e : outcome.report.entries) RenderEntry(e, out);
  }
}

}  // namespace

ResolvedInput ResolveInput(const std::string& argument) {
  for (const std::string& path : {argument, argument + ".json"}) {
    if (fs::is_regular_file(path)) return ResolvedInput{argument, ParseModelFile(path)};
  }
  std::string stem = fs::path(argument).filename().string();
  if (stem.size() > 5 && stem.compare(stem.size() - 5, 5, ".json") == 0) {
    stem = stem.substr(0, stem.size() - 5);
  }
  if (const Scenario* scenario = FindScenario(stem)) {
    return ResolvedInput{scenario->name, scenario->build()};
  }
  Usage("\"" + argument + "\" is neither a file nor a bundled scenario (see `scenarios list`)");
}

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact checks of privacy definitions on finite causal models.", "dpcausal"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  std::string format = "text";
  std::string report_path;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--report", report_path, "Also write the JSON report to this path");
  };

  std::string input;
  std::string definition;
  std::string target = "1/1";
  std::optional<std::string> pop;
  std::string source;
  std::vector<std::string> sink;
  int budget = 4;
  std::string witness_out;
  std::string prior;
  std::string output;
  std::string intervene;
  std::string directory;
  std::string report_input;
  std::optional<std::string> replay_input;

  CLI::App* epsilon = app.add_subcommand("epsilon", "Classic ratio of a mechanism, or an effect bound");
  epsilon->add_option("input", input, "Mechanism or sem file, or scenario name")->required();
  epsilon->add_option("--source", source, "Intervened variable for an effect bound");
  epsilon->add_option("--sink", sink, "Comma-separated outcome variables")->delimiter(',');
  add_common(epsilon);

  CLI::App* check = app.add_subcommand("check", "Check one privacy definition");
  check->add_option("definition", definition, "Definition name")->required();
  check->add_option("input", input, "Mechanism file or scenario name")->required();
  check->add_option("--target-ratio", target, "Ratio bound e^epsilon as p/q")->required();
  check->add_option("--pop", pop, "Population: a name from the file or a distribution file");
  add_common(check);

  CLI::App* falsify = app.add_subcommand("falsify", "Search for a population breaking a definition");
  falsify->add_option("definition", definition, "Only bayesian0")->required();
  falsify->add_option("input", input, "Mechanism file or scenario name")->required();
  falsify->add_option("--target-ratio", target, "Ratio bound as p/q")->required();
  falsify->add_option("--budget", budget, "Largest denominator searched")
      ->check(CLI::PositiveNumber);
  falsify->add_option("--witness-out", witness_out, "Write the population found here");
  add_common(falsify);

  CLI::App* posterior = app.add_subcommand("posterior", "An adversary's posterior after one output");
  posterior->add_option("input", input, "Mechanism file or scenario name")->required();
  posterior->add_option("prior", prior, "Distribution file or population name")->required();
  posterior->add_option("--output", output, "Observed output")->required();
  posterior->add_option("--intervene", intervene, "Replace one data point, e.g. D_1=neg");
  add_common(posterior);

  CLI::App* compose = app.add_subcommand("compose", "Check sequential composition");
  compose->add_option("input", input, "Composition file or scenario name")->required();
  add_common(compose);

  CLI::App* scenarios = app.add_subcommand("scenarios", "The bundled scenario library");
  scenarios->require_subcommand(1);
  CLI::App* list = scenarios->add_subcommand("list", "List scenarios");
  add_common(list);
  CLI::App* run_all = scenarios->add_subcommand("run-all", "Run every applicable check");
  add_common(run_all);
  CLI::App* exporter = scenarios->add_subcommand("export", "Write every scenario as a file");
  exporter->add_option("directory", directory, "Target directory")->required();

  CLI::App* replay = app.add_subcommand("replay", "Re-verify a report against its input");
  replay->add_option("report_file", report_input, "Report file")->required();
  replay->add_option("input", replay_input, "Input file (defaults to the one named in the report)");
  add_common(replay);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitInvalid;
  }

  try {
    Outcome outcome;
    if (epsilon->parsed()) {
      outcome = CmdEpsilon(input, source, sink);
    } else if (check->parsed()) {
      outcome = CmdCheck(definition, input, target, pop);
    } else if (falsify->parsed()) {
      outcome = CmdFalsify(definition, input, target, budget, witness_out);
    } else if (posterior->parsed()) {
      outcome = CmdPosterior(input, prior, output, intervene);
    } else if (compose->parsed()) {
      outcome = CmdCompose(input);
    } else if (list->parsed()) {
      if (format == "json") {
        OrderedJson all = OrderedJson::array();
        for (const Scenario& s : Scenarios()) {
          all.push_back(OrderedJson{{"name", s.name}, {"kind", ModelKind(s.build())},
                                    {"aliases", s.aliases}, {"summary", s.summary}});
        }
        out << all.dump(2) << "\n";
      } else {
        for (const Scenario& s : Scenarios()) {
          out << s.name << " (" << ModelKind(s.build()) << "): " << s.summary << "\n";
        }
      }
      return kExitPass;
    } else if (exporter->parsed()) {
      fs::create_directories(directory);
      for (const Scenario& s : Scenarios()) {
        const std::string path = (fs::path(directory) / (s.name + ".json")).string();
        WriteText(path, SerializeModel(s.build()));
        out << path << "\n";
      }
      return kExitPass;
    } else if (run_all->parsed()) {
      outcome = CmdRunAll();
    } else if (replay->parsed()) {
      outcome = CmdReplay(report_input, replay_input);
    }
    Emit(outcome, format, report_path, out);
    return outcome.exit_code;
  } catch (const Error& e) {
    err << "dpcausal: " << e.Describe() << "\n";
    return ExitCodeFor(e.kind());
  } catch (const std::exception& e) {
    err << "dpcausal: " << e.what() << "\n";
    return kExitInvalid;
  }
}

}  // namespace dpcausal
