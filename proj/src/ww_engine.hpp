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

#ifndef MCSVM_SRC_WW_ENGINE_HPP_
#define MCSVM_SRC_WW_ENGINE_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "mcsvm/solver.hpp"
#include "mcsvm/ww.hpp"

namespace mcsvm::detail {

/// A lane is a sequence of pairs run on one thread; a section is a set of
/// lanes touching disjoint classes.
using Lane = std::vector<ClassPair>;
using Section = std::vector<Lane>;

std::vector<Section> ww_flat_sections(std::size_t num_classes);
std::vector<Section> ww_bundle_sections(std::span<const Bundle> bundles);

/// Samples of each class in the order they appear in `perm`, zero samples
/// dropped.
std::vector<std::vector<std::size_t>> ww_class_orders(const SparseDataset& ds,
                                                     std::span<const std::size_t> perm);

struct WwSweep {
  const std::vector<std::vector<std::size_t>>* class_order;
  double epsilon;
  ShrinkPolicy policy;
};

/// Coordinates (i, second) for i in I_first, then (i, first) for i in
/// I_second, skipping shrunk ones. Returns the number of moved coordinates.
std::size_t ww_process_pair(WwState& state, ClassPair pair, const WwSweep& sweep);

/// Re-activates every coordinate of samples whose label is in `classes`.
void ww_unshrink(WwState& state, std::span<const ClassId> classes);
std::size_t ww_active_count(const WwState& state, std::span<const ClassId> classes);

/// Dual terms -1/2||w_c||^2 for c in `classes` plus the alpha sums of the
/// samples labelled with those classes.
double ww_dual_terms(const WwState& state, std::span<const ClassId> classes, std::size_t workers);
/// Primal terms 1/2||w_c||^2 for c in `classes` plus the hinge terms of
/// samples labelled with those classes.
double ww_primal_terms(const WwState& state, std::span<const ClassId> classes, std::size_t workers);

}  // namespace mcsvm::detail

#endif  // MCSVM_SRC_WW_ENGINE_HPP_
