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


#include "dpcausal/report.h"

#include <openssl/evp.h>

#include <cstdio>

#include "dpcausal/error.h"

namespace dpcausal {
namespace {

[[noreturn]] void Invalid(const std::string& message) {
  throw Error(ErrorKind::kValidation, message);
}

const OrderedJson& Member(const OrderedJson& object, const char* key) {
  if (!object.is_object() || !object.contains(key)) {
    Invalid(std::string("report entry lacks \"") + key + "\"");
  }
  return object.at(key);
}

std::string StringMember(const OrderedJson& object, const char* key) {
  const OrderedJson& v = Member(object, key);
  if (!v.is_string()) Invalid(std::string("\"") + key + "\" must be a string");
  return v.get<std::string>();
}

int IndexIn(const FiniteDomain& domain, const std::string& value, const char* what) {
  const auto idx = domain.Find(value);
  if (!idx) Invalid(std::string(what) + " \"" + value + "\" is not in its domain");
  return *idx;
}

Database DatabaseFromLabel(const MechanismKernel& kernel, const std::string& label) {
  for (int k = 0; k < kernel.num_databases(); ++k) {
    const Database d = kernel.DatabaseAt(k);
    if (kernel.DatabaseLabel(d) == label) return d;
  }
  Invalid("database \"" + label + "\" is not a database of the kernel");
}

int CoordinateFromName(const MechanismKernel& kernel, const std::string& name) {
  for (int i = 0; i < kernel.n(); ++i) {
    if (DataPointName(i) == name) return i;
  }
  Invalid("\"" + name + "\" is not a data point of the kernel");
}

}  // namespace

std::string Sha256Hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorKind::kInvalidArgument, "SHA-256 computation failed");
  }
  std::string out;
  char hex[3];
  for (unsigned int k = 0; k < length; ++k) {
    std::snprintf(hex, sizeof(hex), "%02x", digest[k]);
    out += hex;
  }
  return out;
}

std::string InputDigest(const ModelFile& input) {
  return "sha256:" + Sha256Hex(SerializeModel(input));
}

std::string SerializeReport(const ReportFile& report) {
  OrderedJson out;
  out["kind"] = "report";
  out["tool"] = report.tool;
  out["version"] = report.version;
  out["enumeration_order"] = report.enumeration_order;
  out["command"] = report.command;
  out["input"] = report.input;
  out["input_digest"] = report.input_digest;
  out["entries"] = report.entries;
  return out.dump(2) + "\n";
}

ReportFile ParseReport(std::string_view text, const std::string& source) {
  const LocatedJson doc = ParseLocatedJson(text, source);
  auto fail = [&](const std::string& pointer, const std::string& message) {
    throw Error(ErrorKind::kValidation, message, doc.Locate(pointer));
  };
  const OrderedJson& root = doc.root;
  if (!root.is_object()) fail("", "a report is a JSON object");
  for (const auto& item : root.items()) {
    static const std::vector<std::string> kAllowed = {
        "kind", "tool", "version", "enumeration_order", "command", "input", "input_digest",
        "entries"};
    if (std::find(kAllowed.begin(), kAllowed.end(), item.key()) == kAllowed.end()) {
      fail("/" + item.key(), "unknown field \"" + item.key() + "\"");
    }
  }
  for (const char* key : {"kind", "tool", "version", "command", "input", "input_digest"}) {
    if (!root.contains(key)) fail("", std::string("missing required field \"") + key + "\"");
    if (!root.at(key).is_string()) fail(std::string("/") + key, std::string("\"") + key + "\" must be a string");
  }
  if (root.at("kind") != "report") fail("/kind", "expected kind \"report\"");
  if (!root.contains("enumeration_order") || !root.at("enumeration_order").is_number_integer()) {
    fail("/enumeration_order", "\"enumeration_order\" must be an integer");
  }
  if (!root.contains("entries") || !root.at("entries").is_array()) {
    fail("/entries", "\"entries\" must be an array");
  }
  ReportFile out;
  out.tool = root.at("tool").get<std::string>();
  out.version = root.at("version").get<std::string>();
  out.enumeration_order = root.at("enumeration_order").get<int>();
  out.command = root.at("command").get<std::string>();
  out.input = root.at("input").get<std::string>();
  out.input_digest = root.at("input_digest").get<std::string>();
  for (const auto& entry : root.at("entries")) out.entries.push_back(entry);
  return out;
}

OrderedJson CheckReportToJson(const CheckReport& report, const MechanismKernel& kernel) {
  OrderedJson out;
  out["type"] = "check";
  out["definition"] = DefinitionName(report.definition);
  out["target_ratio"] = report.target_ratio.ToString();
  out["achieved_ratio"] = report.achieved.ToString();
  out["epsilon"] = report.achieved.EpsilonString();
  out["pass"] = report.pass;
  if (report.witness) {
    const CheckWitness& w = *report.witness;
    OrderedJson wj;
    wj["coordinate"] = DataPointName(w.coordinate);
    if (w.database) wj["database"] = kernel.DatabaseLabel(*w.database);
    wj["value"] = kernel.data_domain().value(w.value);
    wj["alternative"] = kernel.data_domain().value(w.alternative);
    wj["output"] = kernel.output_domain().value(w.output);
    wj["population"] = w.population;
    if (w.point) wj["point"] = kernel.DatabaseLabel(*w.point);
    out["witness"] = std::move(wj);
  } else {
    out["witness"] = nullptr;
  }
  out["skipped_comparisons"] = report.skipped_comparisons;
  if (!report.reduction.empty()) out["reduction"] = report.reduction;
  out["notes"] = report.notes;
  out["fast_path"] = OrderedJson{{"queries", report.fast_path_queries},
                                 {"mismatches", report.fast_path_mismatches}};
  return out;
}

CheckReport CheckReportFromJson(const OrderedJson& entry, const MechanismKernel& kernel) {
  CheckReport report;
  try {
    report.definition = ParseDefinition(StringMember(entry, "definition"));
    report.target_ratio = RatioBound::Parse(StringMember(entry, "target_ratio"));
    report.achieved = RatioBound::Parse(StringMember(entry, "achieved_ratio"));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kValidation) throw;
    Invalid(e.what());
  }
  const OrderedJson& pass = Member(entry, "pass");
  if (!pass.is_boolean()) Invalid("\"pass\" must be a boolean");
  report.pass = pass.get<bool>();
  const OrderedJson& w = Member(entry, "witness");
  if (!w.is_null()) {
    CheckWitness witness;
    witness.coordinate = CoordinateFromName(kernel, StringMember(w, "coordinate"));
    if (w.contains("database")) witness.database = DatabaseFromLabel(kernel, StringMember(w, "database"));
    witness.value = IndexIn(kernel.data_domain(), StringMember(w, "value"), "value");
    witness.alternative = IndexIn(kernel.data_domain(), StringMember(w, "alternative"), "alternative");
    witness.output = IndexIn(kernel.output_domain(), StringMember(w, "output"), "output");
    witness.population = StringMember(w, "population");
    if (w.contains("point")) witness.point = DatabaseFromLabel(kernel, StringMember(w, "point"));
    report.witness = std::move(witness);
  }
  if (entry.contains("skipped_comparisons") && entry.at("skipped_comparisons").is_number_integer()) {
    report.skipped_comparisons = entry.at("skipped_comparisons").get<long>();
  }
  if (entry.contains("reduction") && entry.at("reduction").is_string()) {
    report.reduction = entry.at("reduction").get<std::string>();
  }
  return report;
}

OrderedJson EffectBoundToJson(const EffectBound& bound, const Sem& model,
                              const std::vector<std::string>& sink,
                              const std::string& source) {
  OrderedJson out;
  out["bound"] = bound.bound.ToString();
  out["epsilon"] = bound.bound.EpsilonString();
  if (bound.witness) {
    const EffectWitness& w = *bound.witness;
    const FiniteDomain& source_domain = model.variable(model.IndexOf(source)).domain;
    OrderedJson sink_values = OrderedJson::object();
    for (std::size_t k = 0; k < sink.size(); ++k) {
      sink_values[sink[k]] = model.variable(model.IndexOf(sink[k])).domain.value(w.sink[k]);
    }
    OrderedJson wj;
    wj["sink"] = std::move(sink_values);
    wj["source_value"] = source_domain.value(w.source_value);
    wj["alternative"] = source_domain.value(w.alternative);
    if (w.exogenous) {
      OrderedJson exo = OrderedJson::object();
      const std::vector<int> exo_vars = model.Exogenous();
      for (std::size_t k = 0; k < exo_vars.size(); ++k) {
        const Variable& var = model.variable(exo_vars[k]);
        exo[var.name] = var.domain.value((*w.exogenous)[k]);
      }
      wj["exogenous_point"] = std::move(exo);
    }
    out["witness"] = std::move(wj);
  } else {
    out["witness"] = nullptr;
  }
  out["degenerate_comparisons"] = bound.degenerate;
  return out;
}

}  // namespace dpcausal
