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

#include "dpcausal/error.h"

namespace dpcausal {

std::string_view ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
    case ErrorKind::kDuplicateVariable: return "DuplicateVariable";
    case ErrorKind::kUnknownVariable: return "UnknownVariable";
    case ErrorKind::kValueOutOfDomain: return "ValueOutOfDomain";
    case ErrorKind::kDomainMismatch: return "DomainMismatch";
    case ErrorKind::kInvalidKernel: return "InvalidKernel";
    case ErrorKind::kInvalidDistribution: return "InvalidDistribution";
    case ErrorKind::kMissingEquation: return "MissingEquation";
    case ErrorKind::kCyclicModel: return "CyclicModel";
    case ErrorKind::kExogenousTarget: return "ExogenousTarget";
    case ErrorKind::kZeroProbabilityEvent: return "ZeroProbabilityEvent";
    case ErrorKind::kBiasOutOfRange: return "BiasOutOfRange";
    case ErrorKind::kRatioOutOfRange: return "RatioOutOfRange";
    case ErrorKind::kNotAProductDistribution: return "NotAProductDistribution";
    case ErrorKind::kInvalidEffectQuery: return "InvalidEffectQuery";
    case ErrorKind::kNotInSequence: return "NotInSequence";
    case ErrorKind::kPremiseViolated: return "PremiseViolated";
    case ErrorKind::kZeroEvidence: return "ZeroEvidence";
    case ErrorKind::kParse: return "ParseError";
    case ErrorKind::kValidation: return "ValidationError";
    case ErrorKind::kMissingPopulation: return "MissingPopulation";
    case ErrorKind::kUnexpectedPopulation: return "UnexpectedPopulation";
  }
  return "Unknown";
}

std::string Error::Describe() const {
  std::string out;
  if (location_.has_value()) {
    out += location_->source.empty() ? "<input>" : location_->source;
    out += ":" + std::to_string(location_->line) + ":" +
           std::to_string(location_->column) + ": ";
  }
  out += std::string(ErrorKindName(kind_)) + ": " + what();
  return out;
}

}  // namespace dpcausal
