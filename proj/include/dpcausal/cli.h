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


// The `dpcausal` command line, callable in-process so tests can drive it.

#ifndef DPCAUSAL_CLI_H_
#define DPCAUSAL_CLI_H_

#include <ostream>
#include <string>
#include <vector>

#include "dpcausal/model_io.h"

namespace dpcausal {

enum ExitCode : int {
  kExitPass = 0,
  kExitFail = 1,
  kExitNotFound = 2,
  kExitDegenerate = 3,
  kExitInvalid = 4,
};

// `args` excludes the program name. Normal output goes to `out`, diagnostics
// to `err`. Returns the process exit code.
int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// An input argument resolved to a file: an existing path, the path with
// ".json" appended, or a bundled scenario named by the path's basename.
struct ResolvedInput {
  std::string label;
  ModelFile file;
};

// Errors: kInvalidArgument when nothing matches, plus parse errors.
ResolvedInput ResolveInput(const std::string& argument);

}  // namespace dpcausal

#endif  // DPCAUSAL_CLI_H_
