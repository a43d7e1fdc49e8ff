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

#ifndef DPCAUSAL_ERROR_H_
#define DPCAUSAL_ERROR_H_

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dpcausal {

enum class ErrorKind {
  kInvalidArgument,
  // Model construction and validation.
  kDuplicateVariable,
  kUnknownVariable,
  kValueOutOfDomain,
  kDomainMismatch,
  kInvalidKernel,
  kInvalidDistribution,
  kMissingEquation,
  kCyclicModel,
  kExogenousTarget,
  // Inference.
  kZeroProbabilityEvent,
  // Mechanism parameters.
  kBiasOutOfRange,
  kRatioOutOfRange,
  // Checkers.
  kNotAProductDistribution,
  kInvalidEffectQuery,
  kNotInSequence,
  kPremiseViolated,
  kZeroEvidence,
  // Command-line front end.
  kParse,
  kValidation,
  kMissingPopulation,
  kUnexpectedPopulation,
};

std::string_view ErrorKindName(ErrorKind kind);

// Position inside a model file, 1-based.
struct SourceLocation {
  std::string source;
  int line = 0;
  int column = 0;
};

// All library failures are reported through this exception type. The kind is
// stable and meant for dispatch; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}
  Error(ErrorKind kind, const std::string& message, SourceLocation location)
      : std::runtime_error(message), kind_(kind), location_(std::move(location)) {}

  ErrorKind kind() const { return kind_; }
  const std::optional<SourceLocation>& location() const { return location_; }

  // "<source>:<line>:<column>: <Kind>: <message>" when a location is known.
  std::string Describe() const;

 private:
  ErrorKind kind_;
  std::optional<SourceLocation> location_;
};

}  // namespace dpcausal

#endif  // DPCAUSAL_ERROR_H_
