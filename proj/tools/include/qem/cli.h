// Copyright 2026 The qem-mix Authors
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

#ifndef QEM_CLI_H
#define QEM_CLI_H

#include <iosfwd>
#include <span>
#include <string>

namespace qem::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kDataError = 2,
    kNumericalError = 3,
};

/// Runs one `qem-mix` invocation. `args` excludes the program name. Data and
/// human summaries go to `out`; logs and error messages go to `err`.
int dispatch(std::span<const std::string> args, std::ostream &out, std::ostream &err);

}  // namespace qem::cli

#endif
