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

#include "mcsvm/sched.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "mcsvm/errors.hpp"

namespace mcsvm {

int num_rounds(int num_classes) { return num_classes % 2 == 0 ? num_classes - 1 : num_classes; }

int match_class(int num_classes, int c, int r) {
  if (num_classes < 2) throw InvalidArgument("need at least two classes");
  if (c < 1 || c > num_classes) throw InvalidArgument("class " + std::to_string(c) + " out of range");
  if (r < 1 || r > num_rounds(num_classes)) throw InvalidArgument("round " + std::to_string(r) + " out of range");

  const bool even = num_classes % 2 == 0;
  if (even && c == num_classes) return r;
  if (c == r) return even ? num_classes : c;
  // Polygon of the non-central vertices; odd counts use the padded even size.
  const int polygon = even ? num_classes - 1 : num_classes;
  int m = (2 * r - c) % polygon;
  if (m <= 0) m += polygon;
  return m;
}

Schedule build_schedule(std::span<const ClassId> classes) {
  const int count = static_cast<int>(classes.size());
  if (count < 2) {
    // A single class has no pairs; keep it visible as a bye.
    Schedule s;
    if (count == 1) s.push_back(Round{{}, {classes[0]}});
    return s;
  }
  Schedule schedule(static_cast<std::size_t>(num_rounds(count)));
  for (int r = 1; r <= num_rounds(count); ++r) {
    Round& round = schedule[static_cast<std::size_t>(r - 1)];
    for (int c = 1; c <= count; ++c) {
      const int partner = match_class(count, c, r);
      if (partner == c) {
        round.byes.push_back(classes[static_cast<std::size_t>(c - 1)]);
      } else if (partner > c) {
        round.pairs.push_back({classes[static_cast<std::size_t>(c - 1)],
                               classes[static_cast<std::size_t>(partner - 1)]});
      }
    }
  }
  return schedule;
}

Schedule build_schedule(std::size_t num_classes) {
  if (num_classes < 2) throw InvalidArgument("need at least two classes");
  std::vector<ClassId> ids(num_classes);
  std::iota(ids.begin(), ids.end(), 0);
  return build_schedule(std::span<const ClassId>(ids));
}

std::vector<Bundle> chunk_classes(std::size_t num_classes, std::size_t num_workers,
                                  std::span<const std::size_t> class_sizes) {
  if (num_workers == 0) throw InvalidArgument("need at least one worker");
  if (!class_sizes.empty() && class_sizes.size() != num_classes) {
    throw InvalidArgument("class_sizes must have one entry per class");
  }
  const std::size_t k = std::min(num_workers, num_classes);
  std::vector<Bundle> bundles(k);
  if (k == 0) return bundles;
  const std::size_t base = num_classes / k;
  const std::size_t extra = num_classes % k;

  if (class_sizes.empty()) {
    ClassId next = 0;
    for (std::size_t b = 0; b < k; ++b) {
      const std::size_t count = base + (b < extra ? 1 : 0);
      for (std::size_t i = 0; i < count; ++i) bundles[b].push_back(next++);
    }
    return bundles;
  }

  std::vector<ClassId> order(num_classes);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](ClassId a, ClassId b) {
    return class_sizes[static_cast<std::size_t>(a)] > class_sizes[static_cast<std::size_t>(b)];
  });
  std::vector<std::size_t> load(k, 0);
  std::size_t big_bundles = 0;  // bundles that took a (base+1)-th class
  for (ClassId c : order) {
    std::size_t best = k;
    for (std::size_t b = 0; b < k; ++b) {
      const std::size_t count = bundles[b].size();
      const bool room = count < base || (count == base && big_bundles < extra);
      if (!room) continue;
      if (best == k || load[b] < load[best] ||
          (load[b] == load[best] && count < bundles[best].size())) {
        best = b;
      }
    }
    if (bundles[best].size() == base) ++big_bundles;
    bundles[best].push_back(c);
    load[best] += class_sizes[static_cast<std::size_t>(c)];
  }
  for (auto& b : bundles) std::sort(b.begin(), b.end());
  return bundles;
}

std::vector<ClassPair> Phase::flatten() const {
  if (kind == Kind::Cross) return pairs;
  std::vector<ClassPair> out;
  for (const Round& r : rounds) out.insert(out.end(), r.pairs.begin(), r.pairs.end());
  return out;
}

std::vector<SuperRound> two_level_schedule(std::span<const Bundle> bundles) {
  if (bundles.empty()) throw InvalidArgument("need at least one bundle");
  std::vector<SuperRound> out;

  SuperRound self;
  for (std::size_t b = 0; b < bundles.size(); ++b) {
    if (bundles[b].size() < 2) {
      self.idle_bundles.push_back(b);
      continue;
    }
    Phase p;
    p.kind = Phase::Kind::Self;
    p.bundle_a = p.bundle_b = b;
    p.rounds = build_schedule(std::span<const ClassId>(bundles[b]));
    self.phases.push_back(std::move(p));
  }
  out.push_back(std::move(self));

  if (bundles.size() < 2) return out;
  const Schedule bundle_rounds = build_schedule(bundles.size());
  for (const Round& br : bundle_rounds) {
    SuperRound sr;
    for (const ClassPair& bp : br.pairs) {
      const auto a = static_cast<std::size_t>(bp.first);
      const auto b = static_cast<std::size_t>(bp.second);
      Phase p;
      p.kind = Phase::Kind::Cross;
      p.bundle_a = a;
      p.bundle_b = b;
      for (ClassId ca : bundles[a]) {
        for (ClassId cb : bundles[b]) p.pairs.push_back({ca, cb});
      }
      sr.phases.push_back(std::move(p));
    }
    for (ClassId idle : br.byes) sr.idle_bundles.push_back(static_cast<std::size_t>(idle));
    out.push_back(std::move(sr));
  }
  return out;
}

}  // namespace mcsvm
