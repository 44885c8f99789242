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

#ifndef MCSVM_SOLVER_HPP_
#define MCSVM_SOLVER_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <vector>

#include "mcsvm/sched.hpp"

namespace mcsvm {

struct SolverConfig {
  double C = 1.0;          // regularization, box bound on every dual variable
  double epsilon = 1e-3;   // KKT tolerance band on the coordinate gradient
  std::size_t max_epochs = 1000000;
  std::uint64_t seed = 1;
  std::size_t num_workers = 1;
  std::size_t syncs_per_epoch = 10;  // LLW: w-bar refreshes per epoch
  std::size_t shrink_after = 3;      // epochs without update before a coordinate is dropped
  bool shrinking = true;
  /// Evaluate dual/primal objectives after every epoch. Off for benchmarks.
  bool track_objective = true;
  /// WW only: explicit class bundles for the two-level schedule. When
  /// empty, bundles come from chunk_classes if 1 < num_workers < C/2.
  std::vector<Bundle> ww_bundles;

  /// Throws InvalidArgument on non-positive C/epsilon/epochs/workers.
  void validate() const;
};

struct EpochStats {
  std::size_t epoch = 0;
  double dual = std::numeric_limits<double>::quiet_NaN();
  double primal = std::numeric_limits<double>::quiet_NaN();
  double gap = std::numeric_limits<double>::quiet_NaN();
  std::size_t active = 0;  // coordinates left in the sweep after this epoch
  std::size_t updates = 0; // coordinates moved during this epoch
  bool full_pass = false;  // epoch swept every coordinate
  double seconds = 0.0;    // wall time since training started
};

struct TrainStats {
  std::vector<EpochStats> epochs;
  bool converged = false;
  /// Objectives at the initial (all-zero) state.
  double initial_dual = 0.0;
  double initial_primal = 0.0;
  double seconds = 0.0;
};

/// CSV with header "epoch,dual,primal,gap,active,updates,full_pass,seconds".
void write_stats_csv(const TrainStats& stats, std::ostream& out, bool include_seconds = true);

/// Shrink-then-verify termination: once an epoch over the active set makes
/// no update, the next epoch sweeps every coordinate; if that one is clean
/// too, training has converged, otherwise shrinking resumes.
class ConvergenceControl {
 public:
  explicit ConvergenceControl(bool shrinking) : shrinking_(shrinking), full_pass_(!shrinking) {}

  bool full_pass() const noexcept { return full_pass_; }

  /// Returns true when training has converged.
  bool finish_epoch(bool optimal) {
    if (optimal) {
      if (full_pass_) return true;
      full_pass_ = true;
      return false;
    }
    full_pass_ = !shrinking_;
    return false;
  }

 private:
  bool shrinking_;
  bool full_pass_;
};

/// Per-coordinate shrinking bookkeeping shared by all solvers.
struct ShrinkPolicy {
  bool enabled = true;
  std::uint8_t after = 3;

  /// Records one visit; returns whether the coordinate stays active.
  bool visit(bool updated, std::uint8_t& stale) const {
    if (updated) {
      stale = 0;
      return true;
    }
    if (stale < 255) ++stale;
    return !enabled || stale < after;
  }
};

/// Clipped exact 1-d maximizer shared by the three solvers. `grad` is the
/// negated partial derivative (g in the update rules), `curvature` the
/// second derivative magnitude. Returns 0 inside the tolerance band.
inline double clipped_step(double grad, double curvature, double alpha, double C, double eps) {
  if (grad < -eps && alpha < C) {
    const double step = -grad / curvature;
    return step < C - alpha ? step : C - alpha;
  }
  if (grad > eps && alpha > 0.0) {
    const double step = -grad / curvature;
    return step > -alpha ? step : -alpha;
  }
  return 0.0;
}

}  // namespace mcsvm

#endif  // MCSVM_SOLVER_HPP_
