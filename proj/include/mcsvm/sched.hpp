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

#ifndef MCSVM_SCHED_HPP_
#define MCSVM_SCHED_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "mcsvm/dataset.hpp"

namespace mcsvm {

/// Partner of class `c` in round `r` of the circle-method 1-factorization
/// of K_C. Everything is 1-based. For odd C a dummy class C+1 is implied;
/// a return value equal to `c` means `c` sits out (bye) this round.
///
/// Rounds: C-1 for even C, C for odd C.
int match_class(int num_classes, int c, int r);
int num_rounds(int num_classes);

/// Unordered pair of class ids processed together. Solvers sweep the
/// samples of `first` before those of `second`.
struct ClassPair {
  ClassId first;
  ClassId second;

  friend bool operator==(const ClassPair&, const ClassPair&) = default;
};

struct Round {
  std::vector<ClassPair> pairs;
  std::vector<ClassId> byes;
};

using Schedule = std::vector<Round>;

/// 1-factorization over classes 0..C-1; within each pair first < second.
Schedule build_schedule(std::size_t num_classes);
/// Same structure over an arbitrary class list: position p plays the role
/// of class p+1 in match_class.
Schedule build_schedule(std::span<const ClassId> classes);

using Bundle = std::vector<ClassId>;

/// Splits classes into min(num_workers, C) bundles whose class counts
/// differ by at most one. Without `class_sizes` the bundles are
/// contiguous id ranges; with them, classes are placed largest-first into
/// the lightest bundle that still has room. Each bundle is sorted.
std::vector<Bundle> chunk_classes(std::size_t num_classes, std::size_t num_workers,
                                  std::span<const std::size_t> class_sizes = {});

/// A unit of sequential work inside a super-round. A self phase runs the
/// local 1-factorization of one bundle; a cross phase runs every pair of
/// bundle_a x bundle_b in row-major order.
struct Phase {
  enum class Kind { Self, Cross };
  Kind kind = Kind::Self;
  std::size_t bundle_a = 0;
  std::size_t bundle_b = 0;
  Schedule rounds;                // Kind::Self
  std::vector<ClassPair> pairs;   // Kind::Cross, first in bundle_a

  /// All pairs of the phase in execution order.
  std::vector<ClassPair> flatten() const;
};

/// Phases of one super-round touch pairwise disjoint bundles and can run
/// concurrently.
struct SuperRound {
  std::vector<Phase> phases;
  std::vector<std::size_t> idle_bundles;
};

/// Two-level schedule: one super-round of intra-bundle self phases, then
/// one super-round per round of the 1-factorization over bundle indices,
/// pairing bundles (A, B) with A < B. A single bundle yields exactly
/// build_schedule over its classes.
std::vector<SuperRound> two_level_schedule(std::span<const Bundle> bundles);

}  // namespace mcsvm

#endif  // MCSVM_SCHED_HPP_
