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

#ifndef MCSVM_SRC_LLW_ENGINE_HPP_
#define MCSVM_SRC_LLW_ENGINE_HPP_

#include <functional>
#include <span>

#include "mcsvm/llw.hpp"

namespace mcsvm::detail {

/// In-place element-wise sum across all participating nodes. The identity
/// for single-process training.
using AllReduce = std::function<void(std::span<double>)>;

/// acc[j] = sum over owned slots (ascending) of u_slot[j].
void llw_partial_sum(const LlwState& state, std::span<double> acc, std::size_t workers);
/// u_slot -= delta for every owned slot.
void llw_shift(LlwState& state, std::span<const double> delta, std::size_t workers);

/// Sum over owned classes of the dual / primal class terms.
double llw_dual_terms(const LlwState& state, std::size_t workers);
double llw_primal_terms(const LlwState& state, std::size_t workers);

/// The LLW epoch loop over the classes owned by `state`. `allreduce`
/// combines per-node partial sums; every node must call it in lockstep.
TrainStats run_llw(LlwState& state, const SolverConfig& config, const AllReduce& allreduce);

}  // namespace mcsvm::detail

#endif  // MCSVM_SRC_LLW_ENGINE_HPP_
