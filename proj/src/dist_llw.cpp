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

#include <algorithm>

#include "dist_common.hpp"
#include "llw_engine.hpp"
#include "mcsvm/dist.hpp"
#include "mcsvm/llw.hpp"

namespace mcsvm {

DistributedResult llw_distributed_train(const SparseDataset& ds, const SolverConfig& config, Transport& transport) {
  detail::start_distributed(ds, config, transport);
  const auto bundles = partition_classes(ds, transport.num_nodes());
  const Bundle& owned = bundles[transport.node_id()];

  LlwState state(ds, config.C, owned);
  DistributedResult result;
  result.stats = detail::run_llw(state, config, [&](std::span<double> v) { transport.allreduce_sum(v); });

  WeightMatrix local(ds.dim(), ds.num_classes(), ds.dictionary().names());
  std::vector<SparseWeightMessage> mine;
  std::vector<double> w(ds.dim());
  for (ClassId c : owned) {
    const auto u = state.u(c);
    std::transform(u.begin(), u.end(), w.begin(), [](double v) { return -v; });
    if (transport.node_id() == 0) {
      std::copy(w.begin(), w.end(), local.column(c).begin());
    } else {
      mine.push_back(sparsify(static_cast<std::uint32_t>(c), w));
    }
  }
  result.model = detail::gather_model(transport, bundles, std::move(mine), std::move(local));
  return result;
}

}  // namespace mcsvm
