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

#ifndef MCSVM_OVR_HPP_
#define MCSVM_OVR_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mcsvm/dataset.hpp"
#include "mcsvm/model.hpp"
#include "mcsvm/solver.hpp"

namespace mcsvm {

/// One binary problem per class: class c against the rest. beta(i, c) is
/// the dual of sample i in problem c, w(c) = sum_i beta(i, c) s_{c,i} x_i
/// with s_{c,i} = +1 for y_i = c and -1 otherwise.
class OvrState {
 public:
  OvrState(const SparseDataset& ds, double C);

  const SparseDataset& dataset() const noexcept { return *ds_; }
  double C() const noexcept { return C_; }
  std::size_t num_classes() const noexcept { return num_classes_; }

  std::span<double> w(ClassId c) { return {w_.data() + idx(c) * dim_, dim_}; }
  std::span<const double> w(ClassId c) const { return {w_.data() + idx(c) * dim_, dim_}; }
  std::span<double> beta(ClassId c) { return {beta_.data() + idx(c) * n_, n_}; }
  std::span<const double> beta(ClassId c) const { return {beta_.data() + idx(c) * n_, n_}; }
  std::span<std::uint8_t> stale(ClassId c) { return {stale_.data() + idx(c) * n_, n_}; }
  std::span<std::uint8_t> active(ClassId c) { return {active_.data() + idx(c) * n_, n_}; }
  std::span<const std::uint8_t> active(ClassId c) const { return {active_.data() + idx(c) * n_, n_}; }

 private:
  static std::size_t idx(ClassId c) { return static_cast<std::size_t>(c); }

  const SparseDataset* ds_;
  double C_;
  std::size_t num_classes_;
  std::size_t n_;
  std::size_t dim_;
  std::vector<double> w_;
  std::vector<double> beta_;
  std::vector<std::uint8_t> stale_;
  std::vector<std::uint8_t> active_;
};

double ovr_update_coordinate(OvrState& state, std::size_t i, ClassId c, double epsilon);

/// Objectives of the binary problem of class c.
double ovr_dual_objective(const OvrState& state, ClassId c);
double ovr_primal_objective(const OvrState& state, ClassId c);

WeightMatrix ovr_weights(const OvrState& state);

/// Trains the binary problem of class c in place. The result depends only
/// on the dataset, c and the config, never on other classes.
TrainStats ovr_train_class(OvrState& state, ClassId c, const SolverConfig& config);

struct OvrResult {
  WeightMatrix weights;
  OvrState state;
  /// Combined per-epoch trace: objectives summed over classes, a class that
  /// already stopped contributes its final values.
  TrainStats stats;
  std::vector<TrainStats> class_stats;
};

OvrResult ovr_train(const SparseDataset& ds, const SolverConfig& config);

}  // namespace mcsvm

#endif  // MCSVM_OVR_HPP_
