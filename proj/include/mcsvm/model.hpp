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

#ifndef MCSVM_MODEL_HPP_
#define MCSVM_MODEL_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mcsvm/dataset.hpp"

namespace mcsvm {

/// W = (w_1, ..., w_C): one dense length-d vector per class, stored
/// class-major. Weight j of a column multiplies feature index j+1.
class WeightMatrix {
 public:
  WeightMatrix() = default;
  WeightMatrix(std::uint32_t dim, std::size_t num_classes, std::vector<std::string> label_names = {});

  std::uint32_t dim() const noexcept { return dim_; }
  std::size_t num_classes() const noexcept { return num_classes_; }
  const std::vector<std::string>& label_names() const noexcept { return label_names_; }

  std::span<double> column(ClassId c) {
    return {data_.data() + static_cast<std::size_t>(c) * dim_, dim_};
  }
  std::span<const double> column(ClassId c) const {
    return {data_.data() + static_cast<std::size_t>(c) * dim_, dim_};
  }
  std::span<const double> data() const noexcept { return data_; }

  double score(ClassId c, SparseRow x) const { return dot(x, column(c)); }

  friend bool operator==(const WeightMatrix&, const WeightMatrix&) = default;

 private:
  std::uint32_t dim_ = 0;
  std::size_t num_classes_ = 0;
  std::vector<std::string> label_names_;
  std::vector<double> data_;
};

/// argmax_c w_c^T x; ties go to the smallest class id. Features beyond d
/// are ignored.
ClassId predict(const WeightMatrix& w, SparseRow x);

/// Percentage of entries with |W_jc| > threshold.
double density(const WeightMatrix& w, double threshold = 0.0);

/// Binary model file: "MCSVM1", then little-endian u32 d, u32 C, C label
/// names (u32 byte length + UTF-8), then per class u64 nnz followed by nnz
/// (u32 feature index [1-based], f64 value) pairs. Entries whose bit
/// pattern is +0.0 are omitted; everything else round-trips bit-exactly.
void save_model(const WeightMatrix& w, std::ostream& out);
WeightMatrix load_model(std::istream& in);
void save_model(const WeightMatrix& w, const std::filesystem::path& path);
WeightMatrix load_model(const std::filesystem::path& path);

}  // namespace mcsvm

#endif  // MCSVM_MODEL_HPP_
