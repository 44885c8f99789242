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

#include "mcsvm/ww.hpp"

#include <algorithm>
#include <numeric>

#include "mcsvm/errors.hpp"
#include "parallel.hpp"
#include "ww_engine.hpp"

namespace mcsvm {

WwState::WwState(const SparseDataset& ds, double C)
    : ds_(&ds), C_(C), num_classes_(ds.num_classes()), n_(ds.size()), dim_(ds.dim()) {
  if (!(C > 0.0)) throw InvalidArgument("C must be positive");
  w_.assign(num_classes_ * dim_, 0.0);
  alpha_.assign(n_ * num_classes_, 0.0);
  stale_.assign(n_ * num_classes_, 0);
  active_.assign(n_ * num_classes_, 1);
  for (std::size_t i = 0; i < n_; ++i) {
    const auto y = static_cast<std::size_t>(ds.label(i));
    active_[i * num_classes_ + y] = 0;
    if (ds.norm(i) != 0.0) continue;
    for (std::size_t c = 0; c < num_classes_; ++c) {
      if (c == y) continue;
      alpha_[i * num_classes_ + c] = C;
      active_[i * num_classes_ + c] = 0;
    }
  }
}

namespace {

double ww_step(WwState& st, std::size_t i, ClassId c, double eps) {
  const SparseDataset& ds = st.dataset();
  const SparseRow x = ds.row(i);
  const ClassId y = ds.label(i);
  auto wy = st.w(y);
  auto wc = st.w(c);
  double& a = st.alpha_ref(i, c);
  const double g = dot(x, wy) - dot(x, wc) - 1.0;
  const double delta = clipped_step(g, 2.0 * ds.norm(i), a, st.C(), eps);
  if (delta != 0.0) {
    axpy(delta, x, wy);
    axpy(-delta, x, wc);
    detail::apply_step(a, delta, st.C());
  }
  return delta;
}

std::vector<ClassId> all_classes(std::size_t count) {
  std::vector<ClassId> ids(count);
  std::iota(ids.begin(), ids.end(), 0);
  return ids;
}

}  // namespace

double ww_update_coordinate(WwState& state, std::size_t i, ClassId c, double epsilon) {
  const SparseDataset& ds = state.dataset();
  if (i >= ds.size()) throw InvalidArgument("sample index out of range");
  if (c < 0 || static_cast<std::size_t>(c) >= state.num_classes()) throw InvalidArgument("class out of range");
  if (ds.label(i) == c) throw InvalidArgument("alpha_{i,y_i} is determined by the equality constraint");
  if (ds.norm(i) == 0.0) return 0.0;
  return ww_step(state, i, c, epsilon);
}

namespace detail {

std::vector<Section> ww_flat_sections(std::size_t num_classes) {
  std::vector<Section> sections;
  for (const Round& r : build_schedule(num_classes)) {
    Section s;
    for (const ClassPair& p : r.pairs) s.push_back(Lane{p});
    sections.push_back(std::move(s));
  }
  return sections;
}

std::vector<Section> ww_bundle_sections(std::span<const Bundle> bundles) {
  std::vector<Section> sections;
  for (const SuperRound& sr : two_level_schedule(bundles)) {
    Section s;
    for (const Phase& p : sr.phases) s.push_back(p.flatten());
    sections.push_back(std::move(s));
  }
  return sections;
}

std::vector<std::vector<std::size_t>> ww_class_orders(const SparseDataset& ds,
                                                     std::span<const std::size_t> perm) {
  std::vector<std::vector<std::size_t>> order(ds.num_classes());
  for (std::size_t c = 0; c < order.size(); ++c) order[c].reserve(ds.class_members(static_cast<ClassId>(c)).size());
  for (std::size_t i : perm) {
    if (ds.norm(i) == 0.0) continue;
    order[static_cast<std::size_t>(ds.label(i))].push_back(i);
  }
  return order;
}

std::size_t ww_process_pair(WwState& state, ClassPair pair, const WwSweep& sweep) {
  std::size_t moved = 0;
  auto sweep_block = [&](ClassId samples_of, ClassId target) {
    for (std::size_t i : (*sweep.class_order)[static_cast<std::size_t>(samples_of)]) {
      std::uint8_t& act = state.active(i, target);
      if (!act) continue;
      const bool updated = ww_step(state, i, target, sweep.epsilon) != 0.0;
      moved += updated ? 1 : 0;
      if (!sweep.policy.visit(updated, state.stale(i, target))) act = 0;
    }
  };
  sweep_block(pair.first, pair.second);
  sweep_block(pair.second, pair.first);
  return moved;
}

void ww_unshrink(WwState& state, std::span<const ClassId> classes) {
  const SparseDataset& ds = state.dataset();
  const std::size_t C = state.num_classes();
  for (ClassId y : classes) {
    for (std::size_t i : ds.class_members(y)) {
      if (ds.norm(i) == 0.0) continue;
      for (std::size_t c = 0; c < C; ++c) {
        if (static_cast<ClassId>(c) != y) state.active(i, static_cast<ClassId>(c)) = 1;
      }
    }
  }
}

std::size_t ww_active_count(const WwState& state, std::span<const ClassId> classes) {
  const SparseDataset& ds = state.dataset();
  std::size_t count = 0;
  for (ClassId y : classes) {
    for (std::size_t i : ds.class_members(y)) {
      for (std::size_t c = 0; c < state.num_classes(); ++c) count += state.active(i, static_cast<ClassId>(c));
    }
  }
  return count;
}

double ww_dual_terms(const WwState& state, std::span<const ClassId> classes, std::size_t workers) {
  const SparseDataset& ds = state.dataset();
  std::vector<double> terms(classes.size(), 0.0);
  parallel_for(workers, classes.size(), [&](std::size_t k) {
    const ClassId y = classes[k];
    const auto w = state.w(y);
    double t = -0.5 * std::inner_product(w.begin(), w.end(), w.begin(), 0.0);
    for (std::size_t i : ds.class_members(y)) {
      for (std::size_t c = 0; c < state.num_classes(); ++c) {
        if (static_cast<ClassId>(c) != y) t += state.alpha(i, static_cast<ClassId>(c));
      }
    }
    terms[k] = t;
  });
  return std::accumulate(terms.begin(), terms.end(), 0.0);
}

double ww_primal_terms(const WwState& state, std::span<const ClassId> classes, std::size_t workers) {
  const SparseDataset& ds = state.dataset();
  const std::size_t C = state.num_classes();
  std::vector<double> terms(classes.size(), 0.0);
  parallel_for(workers, classes.size(), [&](std::size_t k) {
    const ClassId y = classes[k];
    const auto wy = state.w(y);
    double hinge = 0.0;
    std::vector<double> scores(C);
    for (std::size_t i : ds.class_members(y)) {
      const SparseRow x = ds.row(i);
      for (std::size_t c = 0; c < C; ++c) scores[c] = dot(x, state.w(static_cast<ClassId>(c)));
      for (std::size_t c = 0; c < C; ++c) {
        if (static_cast<ClassId>(c) == y) continue;
        hinge += std::max(0.0, 1.0 - (scores[static_cast<std::size_t>(y)] - scores[c]));
      }
    }
    terms[k] = 0.5 * std::inner_product(wy.begin(), wy.end(), wy.begin(), 0.0) + state.C() * hinge;
  });
  return std::accumulate(terms.begin(), terms.end(), 0.0);
}

}  // namespace detail

double ww_dual_objective(const WwState& state) {
  const auto ids = all_classes(state.num_classes());
  return detail::ww_dual_terms(state, ids, 1);
}

double ww_primal_objective(const WwState& state) {
  const auto ids = all_classes(state.num_classes());
  return detail::ww_primal_terms(state, ids, 1);
}

double ww_duality_gap(const WwState& state) { return ww_primal_objective(state) - ww_dual_objective(state); }

WeightMatrix ww_weights(const WwState& state) {
  const SparseDataset& ds = state.dataset();
  WeightMatrix w(ds.dim(), ds.num_classes(), ds.dictionary().names());
  for (std::size_t c = 0; c < state.num_classes(); ++c) {
    const auto src = state.w(static_cast<ClassId>(c));
    std::copy(src.begin(), src.end(), w.column(static_cast<ClassId>(c)).begin());
  }
  return w;
}

namespace {

void check_partition(std::span<const Bundle> bundles, std::size_t num_classes) {
  std::vector<int> seen(num_classes, 0);
  for (const Bundle& b : bundles) {
    for (ClassId c : b) {
      if (c < 0 || static_cast<std::size_t>(c) >= num_classes || seen[static_cast<std::size_t>(c)]++) {
        throw InvalidArgument("ww_bundles must partition the classes");
      }
    }
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
    throw InvalidArgument("ww_bundles must cover every class");
  }
}

}  // namespace

WwResult ww_train(const SparseDataset& ds, const SolverConfig& config, WwObserver* observer) {
  config.validate();
  const std::size_t C = ds.num_classes();
  if (C < 2) throw InvalidArgument("training needs at least two classes");
  const std::size_t workers = config.num_workers;

  std::vector<Bundle> bundles = config.ww_bundles;
  if (!bundles.empty()) {
    check_partition(bundles, C);
  } else if (workers > 1 && workers < C / 2) {
    std::vector<std::size_t> sizes(C);
    for (std::size_t c = 0; c < C; ++c) sizes[c] = ds.class_members(static_cast<ClassId>(c)).size();
    bundles = chunk_classes(C, workers, sizes);
  }
  const auto sections = bundles.empty() ? detail::ww_flat_sections(C) : detail::ww_bundle_sections(bundles);
  const auto everyone = all_classes(C);

  WwState state(ds, config.C);
  detail::Stopwatch clock;
  TrainStats stats;
  if (config.track_objective) {
    stats.initial_dual = detail::ww_dual_terms(state, everyone, workers);
    stats.initial_primal = detail::ww_primal_terms(state, everyone, workers);
  }

  const ShrinkPolicy policy{config.shrinking, static_cast<std::uint8_t>(config.shrink_after)};
  ConvergenceControl control(config.shrinking);
  for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
    const bool full = control.full_pass();
    if (full) detail::ww_unshrink(state, everyone);
    const auto perm = shuffle_order(ds.size(), epoch_seed(config.seed, epoch));
    const auto order = detail::ww_class_orders(ds, perm);
    const detail::WwSweep sweep{&order, config.epsilon, policy};

    std::size_t updates = 0;
    for (std::size_t s = 0; s < sections.size(); ++s) {
      const auto& lanes = sections[s];
      std::vector<std::size_t> moved(lanes.size(), 0);
      detail::parallel_for(workers, lanes.size(), [&](std::size_t l) {
        for (const ClassPair& p : lanes[l]) {
          if (observer) observer->on_pair(epoch, s, l, p);
          moved[l] += detail::ww_process_pair(state, p, sweep);
        }
      });
      updates += std::accumulate(moved.begin(), moved.end(), std::size_t{0});
    }

    EpochStats es;
    es.epoch = epoch;
    es.updates = updates;
    es.active = detail::ww_active_count(state, everyone);
    es.full_pass = full;
    if (config.track_objective) {
      es.dual = detail::ww_dual_terms(state, everyone, workers);
      es.primal = detail::ww_primal_terms(state, everyone, workers);
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
  WeightMatrix w = ww_weights(state);
  return WwResult{std::move(w), std::move(state), std::move(stats)};
}

}  // namespace mcsvm
