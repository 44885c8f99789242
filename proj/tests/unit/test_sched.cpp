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

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <utility>

#include "mcsvm/errors.hpp"
#include "mcsvm/sched.hpp"

namespace mcsvm {
namespace {

using PairSet = std::multiset<std::pair<ClassId, ClassId>>;

std::pair<ClassId, ClassId> ordered(ClassPair p) { return std::minmax(p.first, p.second); }

PairSet all_pairs(std::size_t num_classes) {
  PairSet out;
  for (ClassId a = 0; a < static_cast<ClassId>(num_classes); ++a) {
    for (ClassId b = a + 1; b < static_cast<ClassId>(num_classes); ++b) out.insert({a, b});
  }
  return out;
}

PairSet covered(const Schedule& s) {
  PairSet out;
  for (const Round& r : s) {
    for (const ClassPair& p : r.pairs) out.insert(ordered(p));
  }
  return out;
}

PairSet covered(const std::vector<SuperRound>& s) {
  PairSet out;
  for (const SuperRound& sr : s) {
    for (const Phase& p : sr.phases) {
      for (const ClassPair& q : p.flatten()) out.insert(ordered(q));
    }
  }
  return out;
}

TEST_CASE("match_class reproduces the published examples") {
  CHECK(match_class(8, 8, 1) == 1);
  CHECK(match_class(8, 1, 1) == 8);
  CHECK(match_class(8, 2, 1) == 7);
  CHECK(match_class(8, 3, 1) == 6);
  CHECK(match_class(8, 4, 1) == 5);
  CHECK(match_class(5, 3, 3) == 3);
}

TEST_CASE("match_class rejects out-of-range arguments") {
  CHECK_THROWS_AS(match_class(1, 1, 1), InvalidArgument);
  CHECK_THROWS_AS(match_class(8, 0, 1), InvalidArgument);
  CHECK_THROWS_AS(match_class(8, 9, 1), InvalidArgument);
  CHECK_THROWS_AS(match_class(8, 1, 8), InvalidArgument);
  CHECK_THROWS_AS(match_class(7, 1, 8), InvalidArgument);
}

TEST_CASE("match_class is an involution") {
  for (int C = 2; C <= 64; ++C) {
    for (int r = 1; r <= num_rounds(C); ++r) {
      for (int c = 1; c <= C; ++c) {
        const int m = match_class(C, c, r);
        REQUIRE(m >= 1);
        REQUIRE(m <= C);
        CHECK(match_class(C, m, r) == c);
      }
    }
  }
}

TEST_CASE("small schedules") {
  const Schedule two = build_schedule(2);
  REQUIRE(two.size() == 1);
  REQUIRE(two[0].pairs.size() == 1);
  CHECK(two[0].pairs[0] == ClassPair{0, 1});

  const Schedule eight = build_schedule(8);
  CHECK(eight.size() == 7);
  for (const Round& r : eight) CHECK(r.pairs.size() == 4);
  CHECK(covered(eight).size() == 28);

  const Schedule seven = build_schedule(7);
  CHECK(seven.size() == 7);
  for (const Round& r : seven) {
    CHECK(r.pairs.size() == 3);
    CHECK(r.byes.size() == 1);
  }
  CHECK(covered(seven) == all_pairs(7));
}

TEST_CASE("every schedule up to 64 classes covers each pair once with disjoint rounds") {
  for (std::size_t C = 2; C <= 64; ++C) {
    const Schedule s = build_schedule(C);
    CHECK(s.size() == static_cast<std::size_t>(num_rounds(static_cast<int>(C))));
    CHECK(covered(s) == all_pairs(C));
    for (const Round& r : s) {
      std::vector<int> seen(C, 0);
      for (const ClassPair& p : r.pairs) {
        CHECK(p.first < p.second);
        ++seen[static_cast<std::size_t>(p.first)];
        ++seen[static_cast<std::size_t>(p.second)];
      }
      for (ClassId b : r.byes) ++seen[static_cast<std::size_t>(b)];
      CHECK(std::all_of(seen.begin(), seen.end(), [](int k) { return k == 1; }));
      CHECK(r.byes.size() == C % 2);
    }
  }
}

TEST_CASE("chunk_classes by count") {
  const auto eight = chunk_classes(8, 4);
  REQUIRE(eight.size() == 4);
  for (const Bundle& b : eight) CHECK(b.size() == 2);

  const auto seven = chunk_classes(7, 3);
  REQUIRE(seven.size() == 3);
  CHECK(seven[0] == Bundle{0, 1, 2});
  CHECK(seven[1] == Bundle{3, 4});
  CHECK(seven[2] == Bundle{5, 6});

  CHECK(chunk_classes(3, 10).size() == 3);
  CHECK_THROWS_AS(chunk_classes(3, 0), InvalidArgument);
  CHECK_THROWS_AS(chunk_classes(3, 2, std::vector<std::size_t>{1, 2}), InvalidArgument);
}

// Best achievable maximum bundle load with equal class counts, by brute force.
std::size_t best_max_load(const std::vector<std::size_t>& sizes, std::size_t k) {
  const std::size_t C = sizes.size();
  std::vector<std::size_t> assign(C, 0);
  std::size_t best = SIZE_MAX;
  const std::size_t base = C / k, extra = C % k;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == C) {
      std::vector<std::size_t> count(k, 0), load(k, 0);
      for (std::size_t c = 0; c < C; ++c) {
        ++count[assign[c]];
        load[assign[c]] += sizes[c];
      }
      std::size_t big = 0;
      for (std::size_t b = 0; b < k; ++b) {
        if (count[b] == base + 1) ++big;
        else if (count[b] != base) return;
      }
      if (big != extra) return;
      best = std::min(best, *std::max_element(load.begin(), load.end()));
      return;
    }
    for (std::size_t b = 0; b < k; ++b) {
      assign[i] = b;
      rec(i + 1);
    }
  };
  rec(0);
  return best;
}

TEST_CASE("chunk_classes by sample count pairs large with small classes") {
  const std::vector<std::size_t> sizes{100, 1, 1, 1, 1, 100};
  const auto bundles = chunk_classes(6, 3, sizes);
  REQUIRE(bundles.size() == 3);
  std::vector<int> seen(6, 0);
  std::size_t max_load = 0;
  for (const Bundle& b : bundles) {
    CHECK(b.size() == 2);
    std::size_t load = 0;
    for (ClassId c : b) {
      ++seen[static_cast<std::size_t>(c)];
      load += sizes[static_cast<std::size_t>(c)];
    }
    max_load = std::max(max_load, load);
  }
  CHECK(std::all_of(seen.begin(), seen.end(), [](int k) { return k == 1; }));
  // The two large classes end up in different bundles.
  for (const Bundle& b : bundles) {
    CHECK(std::count_if(b.begin(), b.end(), [&](ClassId c) { return sizes[static_cast<std::size_t>(c)] == 100; }) <= 1);
  }
  CHECK(max_load == best_max_load(sizes, 3));
}

TEST_CASE("balanced chunking stays within the greedy bound on random sizes") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<std::size_t> size(1, 50);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t C = 2 + trial % 7;
    const std::size_t k = 1 + static_cast<std::size_t>(trial) % 3;
    std::vector<std::size_t> sizes(C);
    for (auto& s : sizes) s = size(rng);
    const auto bundles = chunk_classes(C, k, sizes);
    std::size_t max_load = 0, min_count = SIZE_MAX, max_count = 0;
    for (const Bundle& b : bundles) {
      std::size_t load = 0;
      for (ClassId c : b) load += sizes[static_cast<std::size_t>(c)];
      max_load = std::max(max_load, load);
      min_count = std::min(min_count, b.size());
      max_count = std::max(max_count, b.size());
      CHECK(std::is_sorted(b.begin(), b.end()));
    }
    CHECK(max_count - min_count <= 1);
    const std::size_t largest = *std::max_element(sizes.begin(), sizes.end());
    CHECK(max_load <= best_max_load(sizes, std::min(k, C)) + largest);
  }
}

TEST_CASE("two-level schedule examples") {
  const std::vector<Bundle> one{{0, 1, 2, 3, 4, 5}};
  const auto single = two_level_schedule(one);
  REQUIRE(single.size() == 1);
  REQUIRE(single[0].phases.size() == 1);
  const Schedule flat = build_schedule(6);
  const Schedule& inner = single[0].phases[0].rounds;
  REQUIRE(inner.size() == flat.size());
  for (std::size_t r = 0; r < flat.size(); ++r) CHECK(inner[r].pairs == flat[r].pairs);

  const std::vector<Bundle> two{{0, 1}, {2, 3}};
  const auto s = two_level_schedule(two);
  REQUIRE(s.size() == 2);
  CHECK(s[0].phases.size() == 2);
  REQUIRE(s[1].phases.size() == 1);
  CHECK(s[1].phases[0].pairs ==
        std::vector<ClassPair>{{0, 2}, {0, 3}, {1, 2}, {1, 3}});
  CHECK(covered(s) == all_pairs(4));

  const std::vector<Bundle> singles{{0}, {1}, {2}, {3}};
  CHECK(covered(two_level_schedule(singles)) == covered(build_schedule(4)));
  CHECK_THROWS_AS(two_level_schedule(std::vector<Bundle>{}), InvalidArgument);
}

TEST_CASE("two-level coverage for every bundling size up to 32 classes") {
  std::mt19937_64 rng(23);
  for (std::size_t C = 2; C <= 32; ++C) {
    for (std::size_t k = 1; k <= std::min<std::size_t>(8, C); ++k) {
      for (int variant = 0; variant < 3; ++variant) {
        std::vector<Bundle> bundles;
        if (variant == 0) {
          bundles = chunk_classes(C, k);
        } else {
          // random partition into k non-empty bundles
          std::vector<ClassId> ids(C);
          std::iota(ids.begin(), ids.end(), 0);
          std::shuffle(ids.begin(), ids.end(), rng);
          bundles.assign(k, {});
          for (std::size_t i = 0; i < C; ++i) {
            const std::size_t b = i < k ? i : std::uniform_int_distribution<std::size_t>(0, k - 1)(rng);
            bundles[b].push_back(ids[i]);
          }
        }
        const auto s = two_level_schedule(bundles);
        CHECK(covered(s) == all_pairs(C));
        for (const SuperRound& sr : s) {
          // phases of one super-round touch disjoint bundles
          std::set<std::size_t> used;
          for (const Phase& p : sr.phases) {
            CHECK(used.insert(p.bundle_a).second);
            if (p.bundle_b != p.bundle_a) CHECK(used.insert(p.bundle_b).second);
          }
        }
      }
    }
  }
}

}  // namespace
}  // namespace mcsvm
