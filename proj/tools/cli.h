// Copyright 2026 The ptot Authors
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

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ptot::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitIo = 1,            // unreadable or malformed input, write failures
  kExitPrecondition = 2,  // invalid arguments or domain precondition
};

// Runs one command line (args[0] is the program name). Human output goes
// to `out`, diagnostics to `err`.
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

// Thread count from PTOT_THREADS, or 1 when unset or invalid.
int DefaultThreads();

}  // namespace ptot::cli
