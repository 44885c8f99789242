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

#include "mcsvm/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "mcsvm/errors.hpp"

namespace mcsvm {

namespace {

LabelDictionary numbered_labels(std::size_t classes) {
  std::vector<std::string> names;
  for (std::size_t c = 0; c < classes; ++c) names.push_back(std::to_string(c + 1));
  return LabelDictionary(std::move(names));
}

}  // namespace

SparseDataset make_sparse(const SparseSpec& spec) {
  if (spec.classes == 0 || spec.dim == 0 || spec.nnz_per_row == 0 || spec.nnz_per_row > spec.dim ||
      spec.topic_features == 0 || spec.topic_features > spec.dim) {
    throw InvalidArgument("inconsistent synthetic data spec");
  }
  std::mt19937_64 rng(spec.seed);
  std::uniform_int_distribution<std::uint32_t> any_feature(1, spec.dim);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<std::vector<std::uint32_t>> topics(spec.classes);
  for (auto& t : topics) {
    while (t.size() < spec.topic_features) {
      const std::uint32_t f = any_feature(rng);
      if (std::find(t.begin(), t.end(), f) == t.end()) t.push_back(f);
    }
  }

  std::vector<std::size_t> offsets{0};
  std::vector<Feature> entries;
  std::vector<ClassId> labels;
  std::vector<std::uint32_t> picked;
  for (std::size_t i = 0; i < spec.samples; ++i) {
    const auto y = static_cast<ClassId>(i % spec.classes);
    const auto& topic = topics[static_cast<std::size_t>(y)];
    std::uniform_int_distribution<std::size_t> in_topic(0, topic.size() - 1);
    picked.clear();
    while (picked.size() < spec.nnz_per_row) {
      const std::uint32_t f = unit(rng) < spec.topic_share ? topic[in_topic(rng)] : any_feature(rng);
      if (std::find(picked.begin(), picked.end(), f) == picked.end()) picked.push_back(f);
    }
    std::sort(picked.begin(), picked.end());
    for (std::uint32_t f : picked) entries.push_back({f, 0.1 + unit(rng)});
    offsets.push_back(entries.size());
    labels.push_back(y);
  }
  return SparseDataset(std::move(offsets), std::move(entries), std::move(labels), numbered_labels(spec.classes),
                       spec.dim);
}

SparseDataset make_blobs(const BlobSpec& spec) {
  if (spec.classes == 0 || spec.dim == 0) throw InvalidArgument("inconsistent synthetic data spec");
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  std::vector<double> centers(spec.classes * spec.dim);
  for (std::size_t c = 0; c < spec.classes; ++c) {
    double norm = 0.0;
    for (std::uint32_t j = 0; j < spec.dim; ++j) {
      centers[c * spec.dim + j] = gauss(rng);
      norm += centers[c * spec.dim + j] * centers[c * spec.dim + j];
    }
    norm = std::sqrt(norm);
    for (std::uint32_t j = 0; j < spec.dim; ++j) centers[c * spec.dim + j] *= spec.separation / norm;
  }

  std::vector<std::size_t> offsets{0};
  std::vector<Feature> entries;
  std::vector<ClassId> labels;
  for (std::size_t i = 0; i < spec.samples; ++i) {
    const std::size_t y = i % spec.classes;
    for (std::uint32_t j = 0; j < spec.dim; ++j) {
      const double v = centers[y * spec.dim + j] + spec.spread * gauss(rng);
      if (v != 0.0) entries.push_back({j + 1, v});
    }
    offsets.push_back(entries.size());
    labels.push_back(static_cast<ClassId>(y));
  }
  return SparseDataset(std::move(offsets), std::move(entries), std::move(labels), numbered_labels(spec.classes),
                       spec.dim);
}

}  // namespace mcsvm
