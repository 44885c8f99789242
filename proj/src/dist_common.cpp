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

#include "dist_common.hpp"

#include <algorithm>
#include <string>

#include "mcsvm/dist.hpp"
#include "mcsvm/errors.hpp"

namespace mcsvm {

std::vector<Bundle> partition_classes(const SparseDataset& ds, std::uint32_t num_nodes) {
  std::vector<std::size_t> sizes(ds.num_classes());
  for (std::size_t c = 0; c < sizes.size(); ++c) sizes[c] = ds.class_members(static_cast<ClassId>(c)).size();
  return chunk_classes(ds.num_classes(), num_nodes, sizes);
}

namespace detail {

void start_distributed(const SparseDataset& ds, const SolverConfig& config, Transport& transport) {
  config.validate();
  if (ds.num_classes() < 2) throw InvalidArgument("training needs at least two classes");
  if (transport.num_nodes() > ds.num_classes()) {
    throw InvalidArgument("more nodes (" + std::to_string(transport.num_nodes()) + ") than classes (" +
                          std::to_string(ds.num_classes()) + ")");
  }
  verify_dataset(transport, ds.fingerprint());
}

void check_member(const Bundle& bundle, std::uint32_t c, std::uint32_t from) {
  if (!std::binary_search(bundle.begin(), bundle.end(), static_cast<ClassId>(c))) {
    throw ProtocolError("node " + std::to_string(from) + " sent class " + std::to_string(c) +
                        " which it does not own");
  }
}

std::optional<WeightMatrix> gather_model(Transport& transport, std::span<const Bundle> bundles,
                                         std::vector<SparseWeightMessage> mine, WeightMatrix local) {
  if (transport.node_id() != 0) {
    WeightEnvelope env;
    env.weights = std::move(mine);
    transport.send(0, Message{MessageTag::SparseWeight, encode_envelope(env)});
    return std::nullopt;
  }
  for (std::uint32_t p = 1; p < transport.num_nodes(); ++p) {
    const WeightEnvelope env = decode_envelope(transport.expect(p, MessageTag::SparseWeight).payload);
    if (env.weights.size() != bundles[p].size() || !env.alphas.empty()) {
      throw ProtocolError("node " + std::to_string(p) + " sent a malformed model fragment");
    }
    for (const SparseWeightMessage& m : env.weights) {
      check_member(bundles[p], m.class_id, p);
      densify(m, local.column(static_cast<ClassId>(m.class_id)));
    }
  }
  return local;
}

}  // namespace detail

}  // namespace mcsvm
