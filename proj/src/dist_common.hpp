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

#ifndef MCSVM_SRC_DIST_COMMON_HPP_
#define MCSVM_SRC_DIST_COMMON_HPP_

#include <optional>
#include <span>
#include <vector>

#include "mcsvm/dataset.hpp"
#include "mcsvm/model.hpp"
#include "mcsvm/sched.hpp"
#include "mcsvm/solver.hpp"
#include "mcsvm/transport.hpp"

namespace mcsvm::detail {

/// Validates the run and checks that all nodes hold the same dataset.
void start_distributed(const SparseDataset& ds, const SolverConfig& config, Transport& transport);

/// Node 0 receives the owned columns of every other node and returns the
/// assembled matrix; the others send theirs and get an empty optional.
/// `local` must already hold node 0's own columns.
std::optional<WeightMatrix> gather_model(Transport& transport, std::span<const Bundle> bundles,
                                         std::vector<SparseWeightMessage> mine, WeightMatrix local);

/// Throws ProtocolError unless `c` is a member of `bundle`.
void check_member(const Bundle& bundle, std::uint32_t c, std::uint32_t from);

}  // namespace mcsvm::detail

#endif  // MCSVM_SRC_DIST_COMMON_HPP_
