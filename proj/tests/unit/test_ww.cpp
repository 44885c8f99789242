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

#include <doctest.h>

#include <cmath>
#include <map>
#include <mutex>
#include <random>
#include <set>
#include <tuple>

#include "fixtures.hpp"
#include "mcsvm/errors.hpp"
#include "mcsvm/eval.hpp"
#include "mcsvm/model.hpp"
#include "mcsvm/ww.hpp"
#include "oracle.hpp"

namespace mcsvm {
namespace {

using testing::relative_diff;

SolverConfig tight(double C) {
  SolverConfig config;
  config.C = C;
  config.epsilon = 1e-9;
  return config;
}

/// Records every pair the trainer processes.
class PairLog : public WwObserver {
 public:
  void on_pair(std::size_t epoch, std::size_t section, std::size_t lane, ClassPair pair) override {
    std::lock_guard lock(mu_);
    entries.push_back({epoch, section, lane, pair});
  }

  struct Entry {
    std::size_t epoch, section, lane;
    ClassPair pair;
  };
  std::vector<Entry> entries;

 private:
  std::mutex mu_;
};

std::multiset<std::pair<ClassId, ClassId>> pairs_of_epoch(const PairLog& log, std::size_t epoch) {
  std::multiset<std::pair<ClassId, ClassId>> out;
  for (const auto& e : log.entries) {
    if (e.epoch == epoch) out.insert(std::minmax(e.pair.first, e.pair.second));
  }
  return out;
}

std::multiset<std::pair<ClassId, ClassId>> all_pairs(std::size_t C) {
  std::multiset<std::pair<ClassId, ClassId>> out;
  for (ClassId a = 0; a < static_cast<ClassId>(C); ++a) {
    for (ClassId b = a + 1; b < static_cast<ClassId>(C); ++b) out.insert({a, b});
  }
  return out;
}

/// Within one section, distinct lanes must touch disjoint class sets.
void check_lane_disjointness(const PairLog& log) {
  std::map<std::tuple<std::size_t, std::size_t>, std::map<ClassId, std::size_t>> owner;
  for (const auto& e : log.entries) {
    auto& lanes = owner[{e.epoch, e.section}];
    for (ClassId c : {e.pair.first, e.pair.second}) {
      const auto [it, fresh] = lanes.emplace(c, e.lane);
      if (!fresh) CHECK(it->second == e.lane);
    }
  }
}

TEST_CASE("update examples") {
  const SparseDataset ds = parse_libsvm("a 1:1\nb 2:1\n");
  WwState big(ds, 10.0);
  CHECK(ww_update_coordinate(big, 0, 1, 0.1) == 0.5);
  CHECK(big.alpha(0, 1) == 0.5);
  CHECK(big.w(0)[0] == 0.5);
  CHECK(big.w(1)[0] == -0.5);
  // g = (w_0 - w_1)^T x - 1 = 0
  CHECK(ww_update_coordinate(big, 0, 1, 0.1) == 0.0);

  WwState small(ds, 0.25);
  CHECK(ww_update_coordinate(small, 0, 1, 0.1) == 0.25);
  CHECK_THROWS_AS(ww_update_coordinate(small, 0, 0, 0.1), InvalidArgument);
}

TEST_CASE("dual objective of a single coordinate") {
  const SparseDataset ds = parse_libsvm("a 1:1\nb 2:1\nc 2:1\n");
  WwState s(ds, 0.3);
  CHECK(ww_dual_objective(s) == 0.0);
  const double a = ww_update_coordinate(s, 0, 2, 1e-3);
  CHECK(a == 0.3);
  CHECK(ww_dual_objective(s) == doctest::Approx(a - a * a).epsilon(1e-15));
}

TEST_CASE("zero-state objectives") {
  const SparseDataset ds = testing::toy(12, 3, 4, 5);
  WwState s(ds, 0.5);
  CHECK(ww_dual_objective(s) == 0.0);
  CHECK(ww_primal_objective(s) == doctest::Approx(0.5 * 12 * 2));
  CHECK(ww_duality_gap(s) == doctest::Approx(0.5 * 12 * 2));
}

TEST_CASE("every update ascends from random states") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 10; ++trial) {
    const SparseDataset ds = testing::toy(15, 4, 5, 200 + static_cast<std::uint64_t>(trial));
    const double C = 0.3 + 0.2 * trial;
    WwState s(ds, C);
    std::uniform_real_distribution<double> box(0.0, C);
    for (std::size_t i = 0; i < ds.size(); ++i) {
      for (ClassId c = 0; c < 4; ++c) {
        if (c != ds.label(i)) s.alpha_ref(i, c) = box(rng);
      }
    }
    const auto w = testing::ww_recompute_w(s);
    for (ClassId c = 0; c < 4; ++c) std::copy(w[c].begin(), w[c].end(), s.w(c).begin());

    std::uniform_int_distribution<std::size_t> pick_i(0, ds.size() - 1);
    std::uniform_int_distribution<int> pick_c(0, 3);
    double prev = ww_dual_objective(s);
    for (int step = 0; step < 400; ++step) {
      const std::size_t i = pick_i(rng);
      const ClassId c = pick_c(rng);
      if (c == ds.label(i)) continue;
      ww_update_coordinate(s, i, c, 1e-3);
      CHECK(s.alpha(i, c) >= 0.0);
      CHECK(s.alpha(i, c) <= C);
      const double now = ww_dual_objective(s);
      CHECK(now >= prev - 1e-12 * std::fabs(prev));
      prev = now;
    }
  }
}

TEST_CASE("training matches the QP oracle") {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const SparseDataset ds = testing::toy(10 + 5 * seed, 2 + seed % 3, 3 + static_cast<std::uint32_t>(seed), seed);
    const double C = 0.5 * static_cast<double>(seed);
    const WwResult r = ww_train(ds, tight(C));
    CHECK(r.stats.converged);
    const testing::BoxQp qp = testing::ww_qp(ds, C);
    const double oracle = qp.value(testing::solve_box_qp(qp));
    CHECK(std::fabs(ww_dual_objective(r.state) - oracle) <= 1e-6);
  }
}

TEST_CASE("three-class toy problem matches the oracle coordinates") {
  const SparseDataset ds = testing::toy(9, 3, 2, 5, 3.0);
  const WwResult r = ww_train(ds, tight(1.0));
  const testing::BoxQp qp = testing::ww_qp(ds, 1.0);
  const auto z = testing::solve_box_qp(qp);
  const auto coords = testing::off_class_coords(ds);
  for (std::size_t k = 0; k < coords.size(); ++k) {
    CHECK(std::fabs(r.state.alpha(coords[k].sample, coords[k].cls) - z[k]) <= 1e-6);
  }
  CHECK(ww_duality_gap(r.state) <= 1e-6);
}

TEST_CASE("two classes reduce to one pair per epoch") {
  const SparseDataset ds = testing::toy(20, 2, 3, 6);
  PairLog log;
  const WwResult r = ww_train(ds, tight(1.0), &log);
  REQUIRE(r.stats.converged);
  for (const auto& e : log.entries) {
    CHECK(e.pair == ClassPair{0, 1});
    CHECK(e.section == 0);
  }
  CHECK(log.entries.size() == r.stats.epochs.size());
  const testing::BoxQp qp = testing::ww_qp(ds, 1.0);
  CHECK(std::fabs(ww_dual_objective(r.state) - qp.value(testing::solve_box_qp(qp))) <= 1e-6);
}

TEST_CASE("trained state is consistent, feasible and satisfies the KKT band") {
  const SparseDataset ds = testing::toy(25, 4, 5, 9);
  SolverConfig config;
  config.C = 2.0;
  const WwResult r = ww_train(ds, config);
  REQUIRE(r.stats.converged);
  const auto w = testing::ww_recompute_w(r.state);
  for (ClassId c = 0; c < 4; ++c) {
    CHECK(testing::max_relative_error(r.state.w(c), w[static_cast<std::size_t>(c)]) <= 1e-9);
  }
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const ClassId y = ds.label(i);
    for (ClassId c = 0; c < 4; ++c) {
      if (c == y) continue;
      const double a = r.state.alpha(i, c);
      CHECK(a >= 0.0);
      CHECK(a <= config.C);
      const double g = dot(ds.row(i), r.state.w(y)) - dot(ds.row(i), r.state.w(c)) - 1.0;
      CHECK(testing::kkt_ok(g, a, config.C, config.epsilon));
    }
  }
  const WeightMatrix weights = ww_weights(r.state);
  CHECK(weights == r.weights);
}

TEST_CASE("pairs of one section never share a class") {
  for (std::size_t workers : {1, 2, 3}) {
    const SparseDataset ds = testing::toy(60, 8, 5, 14);
    SolverConfig config;
    config.num_workers = workers;
    PairLog log;
    const WwResult r = ww_train(ds, config, &log);
    check_lane_disjointness(log);
    for (std::size_t e = 1; e <= r.stats.epochs.size(); ++e) CHECK(pairs_of_epoch(log, e) == all_pairs(8));
  }
}

TEST_CASE("explicit bundles are validated and cover every pair") {
  const SparseDataset ds = testing::toy(30, 5, 4, 15);
  SolverConfig config;
  config.ww_bundles = {{0, 3}, {1, 2, 4}};
  PairLog log;
  const WwResult r = ww_train(ds, config, &log);
  check_lane_disjointness(log);
  CHECK(pairs_of_epoch(log, 1) == all_pairs(5));

  config.ww_bundles = {{0, 1}, {1, 2, 3, 4}};
  CHECK_THROWS_AS(ww_train(ds, config), InvalidArgument);
  config.ww_bundles = {{0, 1}, {2, 3}};
  CHECK_THROWS_AS(ww_train(ds, config), InvalidArgument);
  (void)r;
}

TEST_CASE("epoch objectives never decrease and the gap closes") {
  for (std::uint64_t seed : {3, 4, 5}) {
    const SparseDataset ds = testing::toy(40, 5, 8, seed);
    SolverConfig config;
    const WwResult r = ww_train(ds, config);
    REQUIRE(r.stats.converged);
    double prev = r.stats.initial_dual;
    for (const EpochStats& e : r.stats.epochs) {
      CHECK(e.dual >= prev - 1e-12 * std::fabs(prev));
      prev = e.dual;
    }
    CHECK(r.stats.epochs.back().gap <= (r.stats.initial_primal - r.stats.initial_dual) / 100.0);
  }
}

TEST_CASE("worker count does not change the optimum") {
  const SparseDataset ds = testing::toy(80, 9, 8, 12);
  SolverConfig config;
  const WwResult one = ww_train(ds, config);
  for (std::size_t workers : {2, 4}) {
    config.num_workers = workers;
    const WwResult many = ww_train(ds, config);
    CHECK(relative_diff(one.stats.epochs.back().dual, many.stats.epochs.back().dual) <= 1e-4);
  }
}

TEST_CASE("parallel lanes give the same bits as a single thread") {
  const SparseDataset ds = testing::toy(50, 8, 6, 19);
  SolverConfig config;
  config.ww_bundles = {{0, 1, 2, 3}, {4, 5, 6, 7}};
  const WwResult one = ww_train(ds, config);
  config.num_workers = 4;
  const WwResult four = ww_train(ds, config);
  CHECK(one.weights == four.weights);
}

TEST_CASE("wide margins leave interior dual variables at zero") {
  const SparseDataset ds = testing::toy(30, 3, 4, 3, 25.0);
  const WwResult r = ww_train(ds, tight(1.0));
  for (std::size_t i = 0; i < ds.size(); ++i) CHECK(predict(r.weights, ds.row(i)) == ds.label(i));
  CHECK(alpha_density(r.state) < 100.0);
}

TEST_CASE("zero samples sit at the bound") {
  const SparseDataset ds = parse_libsvm("a\nb 1:1\nc 2:1\n");
  const WwResult r = ww_train(ds, tight(0.5));
  CHECK(r.state.alpha(0, 1) == 0.5);
  CHECK(r.state.alpha(0, 2) == 0.5);
  CHECK(r.stats.converged);
}

}  // namespace
}  // namespace mcsvm
