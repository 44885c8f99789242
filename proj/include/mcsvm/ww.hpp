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

#ifndef MCSVM_WW_HPP_
#define MCSVM_WW_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mcsvm/dataset.hpp"
#include "mcsvm/model.hpp"
#include "mcsvm/sched.hpp"
#include "mcsvm/solver.hpp"

namespace mcsvm {

/// Dual state of the Weston-Watkins solver.
///
/// w holds the primal weights directly: w_c = -X alpha_c where the
/// equality constraint alpha_{i,y_i} = -sum_{c != y_i} alpha_{i,c} is
/// substituted, i.e.
///   w_c = sum_{i: y_i = c} (sum_{c' != c} alpha_{i,c'}) x_i - sum_{i: y_i != c} alpha_{i,c} x_i.
/// alpha_{i,y_i} is never materialized. Zero samples start at alpha = C.
class WwState {
 public:
  WwState(const SparseDataset& ds, double C);

  const SparseDataset& dataset() const noexcept { return *ds_; }
  double C() const noexcept { return C_; }
  std::size_t num_classes() const noexcept { return num_classes_; }

  std::span<double> w(ClassId c) { return {w_.data() + static_cast<std::size_t>(c) * dim_, dim_}; }
  std::span<const double> w(ClassId c) const {
    return {w_.data() + static_cast<std::size_t>(c) * dim_, dim_};
  }
  double alpha(std::size_t i, ClassId c) const { return alpha_[i * num_classes_ + static_cast<std::size_t>(c)]; }
  double& alpha_ref(std::size_t i, ClassId c) { return alpha_[i * num_classes_ + static_cast<std::size_t>(c)]; }
  std::uint8_t& stale(std::size_t i, ClassId c) { return stale_[i * num_classes_ + static_cast<std::size_t>(c)]; }
  std::uint8_t& active(std::size_t i, ClassId c) { return active_[i * num_classes_ + static_cast<std::size_t>(c)]; }
  std::uint8_t active(std::size_t i, ClassId c) const { return active_[i * num_classes_ + static_cast<std::size_t>(c)]; }

 private:
  const SparseDataset* ds_;
  double C_;
  std::size_t num_classes_;
  std::size_t n_;
  std::size_t dim_;
  std::vector<double> w_;
  std::vector<double> alpha_;
  std::vector<std::uint8_t> stale_;
  std::vector<std::uint8_t> active_;
};

/// Exact clipped maximization over alpha_{i,c} (touches only w_{y_i} and
/// w_c). Returns the applied step. Requires y_i != c; zero samples skip.
double ww_update_coordinate(WwState& state, std::size_t i, ClassId c, double epsilon);

/// sum_c [ -1/2 ||w_c||^2 ] + sum_{i, c != y_i} alpha_{i,c}.
double ww_dual_objective(const WwState& state);
/// sum_c 1/2 ||w_c||^2 + C sum_i sum_{c != y_i} max(0, 1 - (w_{y_i} - w_c)^T x_i).
double ww_primal_objective(const WwState& state);
double ww_duality_gap(const WwState& state);

WeightMatrix ww_weights(const WwState& state);

/// Receives every class pair as it is processed. `section` numbers the
/// parallel sections of an epoch (rounds or super-rounds); pairs sharing
/// (section, lane) run sequentially on one thread, different lanes of a
/// section may run concurrently. Called from worker threads.
class WwObserver {
 public:
  virtual ~WwObserver() = default;
  virtual void on_pair(std::size_t epoch, std::size_t section, std::size_t lane, ClassPair pair) = 0;
};

struct WwResult {
  WeightMatrix weights;
  WwState state;
  TrainStats stats;
};

/// Dual coordinate ascent over class pairs scheduled by the
/// 1-factorization (or the two-level bundle schedule, see
/// SolverConfig::ww_bundles), with shrinking and a final verification sweep.
WwResult ww_train(const SparseDataset& ds, const SolverConfig& config, WwObserver* observer = nullptr);

}  // namespace mcsvm

#endif  // MCSVM_WW_HPP_
