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

#include "mcsvm/llw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "llw_engine.hpp"
#include "mcsvm/errors.hpp"
#include "parallel.hpp"

namespace mcsvm {

namespace {

constexpr std::size_t kNotOwned = std::numeric_limits<std::size_t>::max();
constexpr std::size_t kFeatureBlock = 4096;

std::vector<ClassId> all_classes(const SparseDataset& ds) {
  std::vector<ClassId> ids(ds.num_classes());
  std::iota(ids.begin(), ids.end(), 0);
  return ids;
}

double llw_step(LlwState& st, std::size_t s, ClassId c, std::size_t i, double eps) {
  const SparseDataset& ds = st.dataset();
  (void)c;
  const SparseRow x = ds.row(i);
  auto u = st.u_slot(s);
  double& a = st.alpha_slot(s)[i];
  const double g = dot(x, u) - 1.0;
  const double delta = clipped_step(g, ds.norm(i), a, st.C(), eps);
  if (delta != 0.0) {
    axpy(delta, x, u);
    detail::apply_step(a, delta, st.C());
  }
  return delta;
}

}  // namespace

LlwState::LlwState(const SparseDataset& ds, double C) : LlwState(ds, C, all_classes(ds)) {}

LlwState::LlwState(const SparseDataset& ds, double C, std::vector<ClassId> owned)
    : ds_(&ds), C_(C), owned_(std::move(owned)), n_(ds.size()), dim_(ds.dim()) {
  if (!(C > 0.0)) throw InvalidArgument("C must be positive");
  slot_of_.assign(ds.num_classes(), kNotOwned);
  for (std::size_t s = 0; s < owned_.size(); ++s) {
    const ClassId c = owned_[s];
    if (c < 0 || static_cast<std::size_t>(c) >= ds.num_classes() || slot_of_[static_cast<std::size_t>(c)] != kNotOwned) {
      throw InvalidArgument("owned classes must be distinct valid class ids");
    }
    slot_of_[static_cast<std::size_t>(c)] = s;
  }
  const std::size_t S = owned_.size();
  u_.assign(S * dim_, 0.0);
  alpha_.assign(S * n_, 0.0);
  stale_.assign(S * n_, 0);
  active_.assign(S * n_, 1);
  for (std::size_t s = 0; s < S; ++s) {
    for (std::size_t i = 0; i < n_; ++i) {
      if (ds.label(i) == owned_[s]) {
        active_[s * n_ + i] = 0;
      } else if (ds.norm(i) == 0.0) {
        alpha_[s * n_ + i] = C;
        active_[s * n_ + i] = 0;
      }
    }
  }
}

std::size_t LlwState::slot(ClassId c) const {
  if (c < 0 || static_cast<std::size_t>(c) >= slot_of_.size() || slot_of_[static_cast<std::size_t>(c)] == kNotOwned) {
    throw InvalidArgument("class " + std::to_string(c) + " is not owned by this state");
  }
  return slot_of_[static_cast<std::size_t>(c)];
}

double llw_update_coordinate(LlwState& state, std::size_t i, ClassId c, double epsilon) {
  const SparseDataset& ds = state.dataset();
  if (i >= ds.size()) throw InvalidArgument("sample index out of range");
  if (ds.label(i) == c) throw InvalidArgument("alpha_{i,y_i} is fixed at zero");
  if (ds.norm(i) == 0.0) return 0.0;
  return llw_step(state, state.slot(c), c, i, epsilon);
}

namespace detail {

void llw_partial_sum(const LlwState& state, std::span<double> acc, std::size_t workers) {
  const std::size_t d = acc.size();
  const std::size_t S = state.owned_classes().size();
  const std::size_t blocks = (d + kFeatureBlock - 1) / kFeatureBlock;
  parallel_for(workers, blocks, [&](std::size_t b) {
    const std::size_t lo = b * kFeatureBlock;
    const std::size_t hi = std::min(d, lo + kFeatureBlock);
    std::fill(acc.begin() + static_cast<std::ptrdiff_t>(lo), acc.begin() + static_cast<std::ptrdiff_t>(hi), 0.0);
    for (std::size_t s = 0; s < S; ++s) {
      const auto u = state.u_slot(s);
      for (std::size_t j = lo; j < hi; ++j) acc[j] += u[j];
    }
  });
}

void llw_shift(LlwState& state, std::span<const double> delta, std::size_t workers) {
  parallel_for(workers, state.owned_classes().size(), [&](std::size_t s) {
    auto u = state.u_slot(s);
    for (std::size_t j = 0; j < u.size(); ++j) u[j] -= delta[j];
  });
}

double llw_dual_terms(const LlwState& state, std::size_t workers) {
  const std::size_t S = state.owned_classes().size();
  std::vector<double> terms(S, 0.0);
  parallel_for(workers, S, [&](std::size_t s) {
    const auto u = state.u_slot(s);
    const auto a = state.alpha_slot(s);
    const double sq = std::inner_product(u.begin(), u.end(), u.begin(), 0.0);
    terms[s] = -0.5 * sq + std::accumulate(a.begin(), a.end(), 0.0);
  });
  return std::accumulate(terms.begin(), terms.end(), 0.0);
}

double llw_primal_terms(const LlwState& state, std::size_t workers) {
  const SparseDataset& ds = state.dataset();
  const std::size_t S = state.owned_classes().size();
  std::vector<double> terms(S, 0.0);
  parallel_for(workers, S, [&](std::size_t s) {
    const ClassId c = state.owned_classes()[s];
    const auto u = state.u_slot(s);
    double hinge = 0.0;
    for (std::size_t i = 0; i < ds.size(); ++i) {
      if (ds.label(i) == c) continue;
      hinge += std::max(0.0, 1.0 - dot(ds.row(i), u));
    }
    terms[s] = 0.5 * std::inner_product(u.begin(), u.end(), u.begin(), 0.0) + state.C() * hinge;
  });
  return std::accumulate(terms.begin(), terms.end(), 0.0);
}

namespace {

void sync(LlwState& state, std::vector<double>& acc, const AllReduce& allreduce, std::size_t workers) {
  llw_partial_sum(state, acc, workers);
  allreduce(acc);
  const double inv = 1.0 / static_cast<double>(state.num_classes());
  for (double& v : acc) v *= inv;
  llw_shift(state, acc, workers);
}

}  // namespace

TrainStats run_llw(LlwState& state, const SolverConfig& config, const AllReduce& allreduce) {
  config.validate();
  const SparseDataset& ds = state.dataset();
  const std::size_t n = ds.size();
  const std::size_t S = state.owned_classes().size();
  const std::size_t workers = config.num_workers;
  const ShrinkPolicy policy{config.shrinking, static_cast<std::uint8_t>(config.shrink_after)};

  std::vector<std::size_t> coord_count(S);
  for (std::size_t s = 0; s < S; ++s) {
    coord_count[s] = n - ds.class_members(state.owned_classes()[s]).size();
  }
  const auto bundles = chunk_classes(S, workers, coord_count);

  Stopwatch clock;
  TrainStats stats;
  auto objectives = [&](double& dual, double& primal) {
    std::vector<double> t{llw_dual_terms(state, workers), llw_primal_terms(state, workers)};
    allreduce(t);
    dual = t[0];
    primal = t[1];
  };
  if (config.track_objective) objectives(stats.initial_dual, stats.initial_primal);

  std::vector<std::vector<std::size_t>> order(S);
  std::vector<std::size_t> slot_updates(S), slot_active(S);
  std::vector<double> acc(ds.dim(), 0.0);
  ConvergenceControl control(config.shrinking);

  for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
    const bool full = control.full_pass();
    const auto perm = shuffle_order(n, epoch_seed(config.seed, epoch));

    parallel_for(workers, S, [&](std::size_t s) {
      const ClassId c = state.owned_classes()[s];
      auto active = state.active_slot(s);
      auto& ord = order[s];
      ord.clear();
      for (std::size_t i : perm) {
        if (ds.label(i) == c || ds.norm(i) == 0.0) continue;
        if (full) active[i] = 1;
        if (active[i]) ord.push_back(i);
      }
      slot_updates[s] = 0;
    });

    const std::size_t segments = config.syncs_per_epoch;
    for (std::size_t seg = 0; seg < segments; ++seg) {
      parallel_for(workers, bundles.size(), [&](std::size_t b) {
        for (ClassId sc : bundles[b]) {
          const auto s = static_cast<std::size_t>(sc);
          const ClassId c = state.owned_classes()[s];
          const auto& ord = order[s];
          const std::size_t lo = ord.size() * seg / segments;
          const std::size_t hi = ord.size() * (seg + 1) / segments;
          auto stale = state.stale_slot(s);
          auto active = state.active_slot(s);
          std::size_t moved = 0;
          for (std::size_t k = lo; k < hi; ++k) {
            const std::size_t i = ord[k];
            const bool updated = llw_step(state, s, c, i, config.epsilon) != 0.0;
            moved += updated ? 1 : 0;
            if (!policy.visit(updated, stale[i])) active[i] = 0;
          }
          slot_updates[s] += moved;
        }
      });
      sync(state, acc, allreduce, workers);
    }

    parallel_for(workers, S, [&](std::size_t s) {
      const ClassId c = state.owned_classes()[s];
      const auto active = state.active_slot(s);
      std::size_t count = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (ds.label(i) != c && ds.norm(i) != 0.0 && active[i]) ++count;
      }
      slot_active[s] = count;
    });

    std::vector<double> tally{
        static_cast<double>(std::accumulate(slot_updates.begin(), slot_updates.end(), std::size_t{0})),
        static_cast<double>(std::accumulate(slot_active.begin(), slot_active.end(), std::size_t{0}))};
    allreduce(tally);

    EpochStats es;
    es.epoch = epoch;
    es.updates = static_cast<std::size_t>(tally[0]);
    es.active = static_cast<std::size_t>(tally[1]);
    es.full_pass = full;
    if (config.track_objective) {
      objectives(es.dual, es.primal);
      es.gap = es.primal - es.dual;
    }
    es.seconds = clock.seconds();
    stats.epochs.push_back(es);

    if (control.finish_epoch(es.updates == 0)) {
      stats.converged = true;
      break;
    }
  }
  stats.seconds = clock.seconds();
  return stats;
}

}  // namespace detail

void llw_sync(LlwState& state) {
  if (!state.owns_all()) throw InvalidArgument("llw_sync needs a state owning every class");
  std::vector<double> acc(state.dataset().dim(), 0.0);
  detail::llw_partial_sum(state, acc, 1);
  const double inv = 1.0 / static_cast<double>(state.num_classes());
  for (double& v : acc) v *= inv;
  detail::llw_shift(state, acc, 1);
}

double llw_dual_objective(const LlwState& state) {
  if (!state.owns_all()) throw InvalidArgument("objective needs a state owning every class");
  return detail::llw_dual_terms(state, 1);
}

double llw_primal_objective(const LlwState& state) {
  if (!state.owns_all()) throw InvalidArgument("objective needs a state owning every class");
  const std::size_t d = state.dataset().dim();
  std::vector<double> sum(d, 0.0);
  detail::llw_partial_sum(state, sum, 1);
  double scale = 0.0;
  for (std::size_t s = 0; s < state.owned_classes().size(); ++s) {
    const auto u = state.u_slot(s);
    scale += std::sqrt(std::inner_product(u.begin(), u.end(), u.begin(), 0.0));
  }
  const double residual = std::sqrt(std::inner_product(sum.begin(), sum.end(), sum.begin(), 0.0));
  if (residual > 1e-9 * scale) {
    throw InvalidArgument("primal objective requires a synced state (sum_c w_c != 0)");
  }
  return detail::llw_primal_terms(state, 1);
}

double llw_duality_gap(const LlwState& state) {
  return llw_primal_objective(state) - llw_dual_objective(state);
}

WeightMatrix llw_weights(const LlwState& state) {
  if (!state.owns_all()) throw InvalidArgument("weights need a state owning every class");
  const SparseDataset& ds = state.dataset();
  WeightMatrix w(ds.dim(), ds.num_classes(), ds.dictionary().names());
  for (ClassId c : state.owned_classes()) {
    const auto u = state.u(c);
    auto col = w.column(c);
    for (std::size_t j = 0; j < u.size(); ++j) col[j] = -u[j];
  }
  return w;
}

LlwResult llw_train(const SparseDataset& ds, const SolverConfig& config) {
  if (ds.num_classes() < 2) throw InvalidArgument("training needs at least two classes");
  LlwState state(ds, config.C);
  TrainStats stats = detail::run_llw(state, config, [](std::span<double>) {});
  WeightMatrix w = llw_weights(state);
  return LlwResult{std::move(w), std::move(state), std::move(stats)};
}

}  // namespace mcsvm
