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

#include "mcsvm/ovr.hpp"

#include <algorithm>
#include <numeric>

#include "mcsvm/errors.hpp"
#include "parallel.hpp"

namespace mcsvm {

OvrState::OvrState(const SparseDataset& ds, double C)
    : ds_(&ds), C_(C), num_classes_(ds.num_classes()), n_(ds.size()), dim_(ds.dim()) {
  if (!(C > 0.0)) throw InvalidArgument("C must be positive");
  w_.assign(num_classes_ * dim_, 0.0);
  beta_.assign(num_classes_ * n_, 0.0);
  stale_.assign(num_classes_ * n_, 0);
  active_.assign(num_classes_ * n_, 1);
  for (std::size_t i = 0; i < n_; ++i) {
    if (ds.norm(i) != 0.0) continue;
    // hinge of a zero sample is constant 1, so its optimal dual sits at C
    for (std::size_t c = 0; c < num_classes_; ++c) {
      beta_[c * n_ + i] = C;
      active_[c * n_ + i] = 0;
    }
  }
}

namespace {

double ovr_step(OvrState& st, std::size_t i, ClassId c, double eps) {
  const SparseDataset& ds = st.dataset();
  const SparseRow x = ds.row(i);
  const double s = ds.label(i) == c ? 1.0 : -1.0;
  auto w = st.w(c);
  double& b = st.beta(c)[i];
  const double g = s * dot(x, w) - 1.0;
  const double delta = clipped_step(g, ds.norm(i), b, st.C(), eps);
  if (delta != 0.0) {
    axpy(s * delta, x, w);
    detail::apply_step(b, delta, st.C());
  }
  return delta;
}

void check_class(const OvrState& st, ClassId c) {
  if (c < 0 || static_cast<std::size_t>(c) >= st.num_classes()) throw InvalidArgument("class out of range");
}

}  // namespace

double ovr_update_coordinate(OvrState& state, std::size_t i, ClassId c, double epsilon) {
  check_class(state, c);
  if (i >= state.dataset().size()) throw InvalidArgument("sample index out of range");
  if (state.dataset().norm(i) == 0.0) return 0.0;
  return ovr_step(state, i, c, epsilon);
}

double ovr_dual_objective(const OvrState& state, ClassId c) {
  check_class(state, c);
  const auto w = state.w(c);
  const auto b = state.beta(c);
  return std::accumulate(b.begin(), b.end(), 0.0) - 0.5 * std::inner_product(w.begin(), w.end(), w.begin(), 0.0);
}

double ovr_primal_objective(const OvrState& state, ClassId c) {
  check_class(state, c);
  const SparseDataset& ds = state.dataset();
  const auto w = state.w(c);
  double hinge = 0.0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const double s = ds.label(i) == c ? 1.0 : -1.0;
    hinge += std::max(0.0, 1.0 - s * dot(ds.row(i), w));
  }
  return 0.5 * std::inner_product(w.begin(), w.end(), w.begin(), 0.0) + state.C() * hinge;
}

WeightMatrix ovr_weights(const OvrState& state) {
  const SparseDataset& ds = state.dataset();
  WeightMatrix w(ds.dim(), ds.num_classes(), ds.dictionary().names());
  for (std::size_t c = 0; c < state.num_classes(); ++c) {
    const auto src = state.w(static_cast<ClassId>(c));
    std::copy(src.begin(), src.end(), w.column(static_cast<ClassId>(c)).begin());
  }
  return w;
}

TrainStats ovr_train_class(OvrState& state, ClassId c, const SolverConfig& config) {
  config.validate();
  check_class(state, c);
  const SparseDataset& ds = state.dataset();
  const std::size_t n = ds.size();
  const ShrinkPolicy policy{config.shrinking, static_cast<std::uint8_t>(config.shrink_after)};
  auto stale = state.stale(c);
  auto active = state.active(c);

  detail::Stopwatch clock;
  TrainStats stats;
  if (config.track_objective) {
    stats.initial_dual = ovr_dual_objective(state, c);
    stats.initial_primal = ovr_primal_objective(state, c);
  }
  ConvergenceControl control(config.shrinking);
  for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
    const bool full = control.full_pass();
    const auto perm = shuffle_order(n, epoch_seed(config.seed, epoch));
    std::size_t updates = 0;
    for (std::size_t i : perm) {
      if (ds.norm(i) == 0.0) continue;
      if (full) active[i] = 1;
      if (!active[i]) continue;
      const bool updated = ovr_step(state, i, c, config.epsilon) != 0.0;
      updates += updated ? 1 : 0;
      if (!policy.visit(updated, stale[i])) active[i] = 0;
    }
    EpochStats es;
    es.epoch = epoch;
    es.updates = updates;
    for (std::size_t i = 0; i < n; ++i) es.active += (ds.norm(i) != 0.0 && active[i]) ? 1 : 0;
    es.full_pass = full;
    if (config.track_objective) {
      es.dual = ovr_dual_objective(state, c);
      es.primal = ovr_primal_objective(state, c);
      es.gap = es.primal - es.dual;
    }
    es.seconds = clock.seconds();
    stats.epochs.push_back(es);
    if (control.finish_epoch(updates == 0)) {
      stats.converged = true;
      break;
    }
  }
  stats.seconds = clock.seconds();
  return stats;
}

OvrResult ovr_train(const SparseDataset& ds, const SolverConfig& config) {
  config.validate();
  const std::size_t C = ds.num_classes();
  if (C < 2) throw InvalidArgument("training needs at least two classes");
  OvrState state(ds, config.C);
  detail::Stopwatch clock;
  std::vector<TrainStats> per_class(C);
  detail::parallel_for(config.num_workers, C, [&](std::size_t c) {
    per_class[c] = ovr_train_class(state, static_cast<ClassId>(c), config);
  });

  TrainStats stats;
  stats.converged = true;
  std::size_t epochs = 0;
  for (const TrainStats& s : per_class) {
    stats.converged = stats.converged && s.converged;
    stats.initial_dual += s.initial_dual;
    stats.initial_primal += s.initial_primal;
    epochs = std::max(epochs, s.epochs.size());
  }
  for (std::size_t e = 0; e < epochs; ++e) {
    EpochStats row;
    row.epoch = e + 1;
    row.dual = row.primal = 0.0;
    row.full_pass = true;
    for (const TrainStats& s : per_class) {
      const EpochStats& src = s.epochs[std::min(e, s.epochs.size() - 1)];
      const bool running = e < s.epochs.size();
      row.dual += src.dual;
      row.primal += src.primal;
      row.active += running ? src.active : 0;
      row.updates += running ? src.updates : 0;
      row.full_pass = row.full_pass && (!running || src.full_pass);
      row.seconds = std::max(row.seconds, src.seconds);
    }
    row.gap = row.primal - row.dual;
    stats.epochs.push_back(row);
  }
  stats.seconds = clock.seconds();
  WeightMatrix w = ovr_weights(state);
  return OvrResult{std::move(w), std::move(state), std::move(stats), std::move(per_class)};
}

}  // namespace mcsvm
