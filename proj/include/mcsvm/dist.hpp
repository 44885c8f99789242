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

#ifndef MCSVM_DIST_HPP_
#define MCSVM_DIST_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "mcsvm/dataset.hpp"
#include "mcsvm/model.hpp"
#include "mcsvm/sched.hpp"
#include "mcsvm/solver.hpp"
#include "mcsvm/transport.hpp"
#include "mcsvm/ww.hpp"

namespace mcsvm {

struct DistributedResult {
  /// Full model, present on node 0 only.
  std::optional<WeightMatrix> model;
  /// Global statistics, identical on every node.
  TrainStats stats;
};

/// Class ownership used by the distributed trainers: bundle k belongs to
/// node k. Deterministic in the dataset, so every node computes the same.
std::vector<Bundle> partition_classes(const SparseDataset& ds, std::uint32_t num_nodes);

/// Every node passes the full dataset and the same config. config.num_workers
/// is the worker count inside each node.
DistributedResult llw_distributed_train(const SparseDataset& ds, const SolverConfig& config, Transport& transport);

/// Equivalent to ww_train with config.ww_bundles = partition_classes(ds, N).
/// The lower node of each paired super-round computes the cross pairs; the
/// observer sees every pair on the node that computes it.
DistributedResult ww_distributed_train(const SparseDataset& ds, const SolverConfig& config, Transport& transport,
                                       WwObserver* observer = nullptr);

}  // namespace mcsvm

#endif  // MCSVM_DIST_HPP_
