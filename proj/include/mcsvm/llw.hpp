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

#ifndef MCSVM_LLW_HPP_
#define MCSVM_LLW_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mcsvm/dataset.hpp"
#include "mcsvm/model.hpp"
#include "mcsvm/solver.hpp"

namespace mcsvm {

/// Dual state of the Lee-Lin-Wahba solver for a set of owned classes.
///
/// Sign convention: the stored vector is u_c = X alpha_c - w_bar, so the
/// coordinate update adds delta * x_i to it and the primal weight is
/// w_c = -u_c. Immediately after a sync, sum_c u_c = 0.
///
/// alpha_{i,y_i} is never stored (it is identically zero). Samples with
/// x_i = 0 do not influence u; their coordinates start at the box bound C,
/// which is their exact optimum, and are never swept.
class LlwState {
 public:
  /// State owning every class of `ds`.
  LlwState(const SparseDataset& ds, double C);
  /// State owning only `owned` (ascending class ids), for distributed runs.
  LlwState(const SparseDataset& ds, double C, std::vector<ClassId> owned);

  const SparseDataset& dataset() const noexcept { return *ds_; }
  double C() const noexcept { return C_; }
  std::size_t num_classes() const noexcept { return ds_->num_classes(); }
  std::span<const ClassId> owned_classes() const noexcept { return owned_; }
  bool owns_all() const noexcept { return owned_.size() == num_classes(); }

  /// Slot of an owned class; throws InvalidArgument otherwise.
  std::size_t slot(ClassId c) const;

  std::span<double> u(ClassId c) { return u_slot(slot(c)); }
  std::span<const double> u(ClassId c) const { return u_slot(slot(c)); }
  double alpha(std::size_t i, ClassId c) const { return alpha_slot(slot(c))[i]; }

  // Slot-level access used by the training loops.
  std::span<double> u_slot(std::size_t s) { return {u_.data() + s * dim_, dim_}; }
  std::span<const double> u_slot(std::size_t s) const { return {u_.data() + s * dim_, dim_}; }
  std::span<double> alpha_slot(std::size_t s) { return {alpha_.data() + s * n_, n_}; }
  std::span<const double> alpha_slot(std::size_t s) const { return {alpha_.data() + s * n_, n_}; }
  std::span<std::uint8_t> stale_slot(std::size_t s) { return {stale_.data() + s * n_, n_}; }
  std::span<std::uint8_t> active_slot(std::size_t s) { return {active_.data() + s * n_, n_}; }
  std::span<const std::uint8_t> active_slot(std::size_t s) const { return {active_.data() + s * n_, n_}; }

 private:
  const SparseDataset* ds_;
  double C_;
  std::vector<ClassId> owned_;
  std::vector<std::size_t> slot_of_;  // class id -> slot, npos if not owned
  std::size_t n_ = 0;
  std::size_t dim_ = 0;
  std::vector<double> u_;
  std::vector<double> alpha_;
  std::vector<std::uint8_t> stale_;
  std::vector<std::uint8_t> active_;
};

/// Exact clipped maximization of the dual over alpha_{i,c} with w_bar held
/// fixed. Returns the applied step (0 inside the epsilon band). Requires
/// y_i != c; zero samples are skipped.
double llw_update_coordinate(LlwState& state, std::size_t i, ClassId c, double epsilon);

/// Exact maximization over the w_bar block: subtracts the class mean of u
/// from every u_c. Requires a state that owns every class.
void llw_sync(LlwState& state);

/// sum_c [ -1/2 ||u_c||^2 + sum_{i: y_i != c} alpha_{i,c} ].
double llw_dual_objective(const LlwState& state);
/// sum_c [ 1/2 ||u_c||^2 + C sum_{i: y_i != c} max(0, 1 - u_c^T x_i) ].
/// Throws InvalidArgument unless the state is synced (sum_c u_c = 0).
double llw_primal_objective(const LlwState& state);
double llw_duality_gap(const LlwState& state);

/// Primal weights w_c = -u_c of a state owning every class.
WeightMatrix llw_weights(const LlwState& state);

struct LlwResult {
  WeightMatrix weights;
  LlwState state;
  TrainStats stats;
};

/// Dual block coordinate ascent with syncs_per_epoch w_bar refreshes per
/// epoch, shrinking and a final full verification sweep. Classes are
/// spread over num_workers threads; the trajectory does not depend on the
/// worker count.
LlwResult llw_train(const SparseDataset& ds, const SolverConfig& config);

}  // namespace mcsvm

#endif  // MCSVM_LLW_HPP_
