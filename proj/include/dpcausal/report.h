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


// Verification reports: what was run, on which input (by digest), and every
// result with a witness that can be replayed against the input.

#ifndef DPCAUSAL_REPORT_H_
#define DPCAUSAL_REPORT_H_

#include <string>
#include <string_view>
#include <vector>

#include "dpcausal/adversary.h"
#include "dpcausal/brp.h"
#include "dpcausal/dp_checkers.h"
#include "dpcausal/model_io.h"

namespace dpcausal {

inline constexpr const char* kToolName = "dpcausal";
inline constexpr const char* kToolVersion = "0.1.0";
// Bumped whenever an enumeration order changes, since witnesses depend on it.
inline constexpr int kEnumerationOrderVersion = 1;

struct ReportFile {
  std::string tool = kToolName;
  std::string version = kToolVersion;
  int enumeration_order = kEnumerationOrderVersion;
  std::string command;
  std::string input;
  // SHA-256 of the canonical serialisation of the input.
  std::string input_digest;
  std::vector<OrderedJson> entries;

  friend bool operator==(const ReportFile&, const ReportFile&) = default;
};

std::string SerializeReport(const ReportFile& report);
// Errors: kParse, kValidation.
ReportFile ParseReport(std::string_view text, const std::string& source);

std::string Sha256Hex(std::string_view bytes);
std::string InputDigest(const ModelFile& input);

// Check results use labels rather than indices: "D_1" for a coordinate,
// "(pos,neg)" for a database, domain values for values and outputs.
OrderedJson CheckReportToJson(const CheckReport& report, const MechanismKernel& kernel);
// Inverse of CheckReportToJson for the fields a replay needs. Errors:
// kValidation.
CheckReport CheckReportFromJson(const OrderedJson& entry, const MechanismKernel& kernel);

OrderedJson EffectBoundToJson(const EffectBound& bound, const Sem& model,
                              const std::vector<std::string>& sink,
                              const std::string& source);

}  // namespace dpcausal

#endif  // DPCAUSAL_REPORT_H_
