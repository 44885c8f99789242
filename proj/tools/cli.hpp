// Copyright 2026 The mcsvm Authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MCSVM_TOOLS_CLI_HPP_
#define MCSVM_TOOLS_CLI_HPP_

#include <iosfwd>

namespace mcsvm::cli {

/// Entry point of the mcsvm tool. Returns 0 on success (training
/// converged), 2 when training hit the epoch limit, 1 on usage or IO errors.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mcsvm::cli

#endif  // MCSVM_TOOLS_CLI_HPP_
