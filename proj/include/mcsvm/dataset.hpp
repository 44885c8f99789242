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

#ifndef MCSVM_DATASET_HPP_
#define MCSVM_DATASET_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace mcsvm {

using ClassId = std::int32_t;

/// One stored entry of a sparse vector. `index` is 1-based as in LIBSVM files.
struct Feature {
  std::uint32_t index;
  double value;

  friend bool operator==(const Feature&, const Feature&) = default;
};

/// Read-only view of one sample: strictly increasing indices, no stored zeros.
using SparseRow = std::span<const Feature>;

double squared_norm(SparseRow x);
/// x^T w for a dense vector w of length d (0-based storage of 1-based
/// feature indices). Features with index > d contribute nothing.
double dot(SparseRow x, std::span<const double> w);
/// w += scale * x, restricted to the first w.size() features.
void axpy(double scale, SparseRow x, std::span<double> w);

/// Bijection between original label tokens and contiguous class ids, in
/// order of first appearance.
class LabelDictionary {
 public:
  LabelDictionary() = default;
  explicit LabelDictionary(std::vector<std::string> names);

  ClassId intern(std::string_view token);
  std::optional<ClassId> find(std::string_view token) const;
  const std::string& name(ClassId id) const { return names_.at(static_cast<std::size_t>(id)); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  std::size_t size() const noexcept { return names_.size(); }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, ClassId> ids_;
};

enum class Normalization { None, UnitNorm, UnitVariance };

/// Parses "none"/"l2"/"var" (and the long names "unit_norm"/"unit_variance").
Normalization parse_normalization(std::string_view text);
std::string_view to_string(Normalization mode);

/// Row-sparse labeled design matrix in CSR layout with per-sample squared
/// norms and a per-class sample index.
class SparseDataset {
 public:
  SparseDataset() = default;

  /// Takes ownership of CSR storage; validates row invariants and
  /// computes norms and the class index. `dim` of 0 means "max index seen".
  SparseDataset(std::vector<std::size_t> row_offsets, std::vector<Feature> entries,
                std::vector<ClassId> labels, LabelDictionary dictionary, std::uint32_t dim = 0);

  std::size_t size() const noexcept { return labels_.size(); }
  std::uint32_t dim() const noexcept { return dim_; }
  std::size_t num_classes() const noexcept { return dictionary_.size(); }

  SparseRow row(std::size_t i) const {
    return {entries_.data() + row_offsets_[i], row_offsets_[i + 1] - row_offsets_[i]};
  }
  ClassId label(std::size_t i) const { return labels_[i]; }
  /// k_i = x_i^T x_i.
  double norm(std::size_t i) const { return norms_[i]; }
  /// I_c: indices of samples with label c, ascending.
  const std::vector<std::size_t>& class_members(ClassId c) const {
    return class_index_[static_cast<std::size_t>(c)];
  }

  std::span<const ClassId> labels() const noexcept { return labels_; }
  std::span<const double> norms() const noexcept { return norms_; }
  std::span<const Feature> entries() const noexcept { return entries_; }
  std::span<const std::size_t> row_offsets() const noexcept { return row_offsets_; }
  const LabelDictionary& dictionary() const noexcept { return dictionary_; }
  std::size_t nnz() const noexcept { return entries_.size(); }

  /// Samples `indices` (in that order), keeping the dictionary and dim.
  SparseDataset subset(std::span<const std::size_t> indices) const;

  /// 64-bit FNV-1a over labels, dim, indices and value bit patterns.
  std::uint64_t fingerprint() const;

 private:
  std::vector<std::size_t> row_offsets_{0};
  std::vector<Feature> entries_;
  std::vector<ClassId> labels_;
  std::vector<double> norms_;
  std::vector<std::vector<std::size_t>> class_index_;
  LabelDictionary dictionary_;
  std::uint32_t dim_ = 0;
};

/// Reads SVMlight/LIBSVM text. When `base` is given, labels are mapped
/// through (a copy of) it, so test files share the training class ids;
/// unseen labels are appended after the known ones.
SparseDataset parse_libsvm(std::istream& in, const LabelDictionary* base = nullptr);
SparseDataset parse_libsvm(std::string_view text, const LabelDictionary* base = nullptr);
SparseDataset load_libsvm(const std::filesystem::path& path, const LabelDictionary* base = nullptr);

/// Writes original label tokens and values with round-trip precision.
void write_libsvm(const SparseDataset& ds, std::ostream& out);

/// Per-column scale factors fitted on a training set, applicable to any
/// dataset (test features beyond the fitted width are left unscaled).
class Normalizer {
 public:
  static Normalizer fit(const SparseDataset& train, Normalization mode);

  Normalization mode() const noexcept { return mode_; }
  /// Multiplicative factor per 0-based column; empty unless unit_variance.
  std::span<const double> column_scale() const noexcept { return column_scale_; }

  SparseDataset apply(const SparseDataset& ds) const;

 private:
  Normalization mode_ = Normalization::None;
  std::vector<double> column_scale_;
};

SparseDataset normalize(const SparseDataset& ds, Normalization mode);

/// Seeded permutation of {0..n-1} (mt19937_64 + Fisher-Yates).
std::vector<std::size_t> shuffle_order(std::size_t n, std::uint64_t seed);

/// Seed for epoch `epoch` of a run seeded with `seed`.
std::uint64_t epoch_seed(std::uint64_t seed, std::uint64_t epoch);

/// Holdout split: the first floor(n * test_fraction) entries of
/// shuffle_order(n, seed) form the test set. Both sides keep the original
/// sample order. Returns (train, test).
std::pair<SparseDataset, SparseDataset> split_holdout(const SparseDataset& ds,
                                                      double test_fraction, std::uint64_t seed);

}  // namespace mcsvm

#endif  // MCSVM_DATASET_HPP_
