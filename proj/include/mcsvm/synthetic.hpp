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

#ifndef MCSVM_SYNTHETIC_HPP_
#define MCSVM_SYNTHETIC_HPP_

#include <cstddef>
#include <cstdint>

#include "mcsvm/dataset.hpp"

namespace mcsvm {

/// Sparse text-like data: every class owns a random set of `topic_features`
/// features; a row draws each of its non-zeros from its class topic with
/// probability `topic_share`, otherwise uniformly from all features.
struct SparseSpec {
  std::size_t samples = 1000;
  std::size_t classes = 10;
  std::uint32_t dim = 1000;
  std::size_t nnz_per_row = 20;
  std::size_t topic_features = 50;
  double topic_share = 0.6;
  std::uint64_t seed = 1;
};

SparseDataset make_sparse(const SparseSpec& spec);

/// Dense Gaussian blobs: class centers at `separation` times a random unit
/// vector, unit-variance noise scaled by `spread`. Every feature is stored.
struct BlobSpec {
  std::size_t samples = 30;
  std::size_t classes = 3;
  std::uint32_t dim = 5;
  double separation = 2.0;
  double spread = 1.0;
  std::uint64_t seed = 1;
};

SparseDataset make_blobs(const BlobSpec& spec);

}  // namespace mcsvm

#endif  // MCSVM_SYNTHETIC_HPP_
