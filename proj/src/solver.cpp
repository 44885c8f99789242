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

#include "mcsvm/solver.hpp"

#include <ostream>

#include "mcsvm/errors.hpp"

namespace mcsvm {

void SolverConfig::validate() const {
  if (!(C > 0.0)) throw InvalidArgument("C must be positive");
  if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be positive");
  if (max_epochs == 0) throw InvalidArgument("max_epochs must be positive");
  if (num_workers == 0) throw InvalidArgument("num_workers must be positive");
  if (syncs_per_epoch == 0) throw InvalidArgument("syncs_per_epoch must be positive");
  if (shrink_after == 0 || shrink_after > 255) throw InvalidArgument("shrink_after must be in [1, 255]");
}

void write_stats_csv(const TrainStats& stats, std::ostream& out, bool include_seconds) {
  const auto old_precision = out.precision(17);
  out << "epoch,dual,primal,gap,active,updates,full_pass";
  if (include_seconds) out << ",seconds";
  out << '\n';
  for (const EpochStats& e : stats.epochs) {
    out << e.epoch << ',' << e.dual << ',' << e.primal << ',' << e.gap << ',' << e.active << ','
        << e.updates << ',' << (e.full_pass ? 1 : 0);
    if (include_seconds) out << ',' << e.seconds;
    out << '\n';
  }
  out.precision(old_precision);
}

}  // namespace mcsvm
