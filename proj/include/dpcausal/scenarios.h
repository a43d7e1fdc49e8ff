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


// The bundled scenario library: small, exactly specified models reproducing
// the worked examples and counterexamples.

#ifndef DPCAUSAL_SCENARIOS_H_
#define DPCAUSAL_SCENARIOS_H_

#include <string>
#include <string_view>
#include <vector>

#include "dpcausal/model_io.h"

namespace dpcausal {

struct Scenario {
  std::string name;
  std::vector<std::string> aliases;
  std::string summary;
  ModelFile (*build)();
};

// In listing order.
const std::vector<Scenario>& Scenarios();

// By name or alias; nullptr when unknown.
const Scenario* FindScenario(std::string_view name);

}  // namespace dpcausal

#endif  // DPCAUSAL_SCENARIOS_H_
