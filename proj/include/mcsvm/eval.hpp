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

#ifndef MCSVM_EVAL_HPP_
#define MCSVM_EVAL_HPP_

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "mcsvm/dataset.hpp"
#include "mcsvm/model.hpp"

namespace mcsvm {

class LlwState;
class WwState;

struct ClassReport {
  std::string label;
  std::size_t support = 0;  // test samples of this class
  std::size_t tp = 0, fp = 0, fn = 0;
  double precision_pct = 0.0;
  double recall_pct = 0.0;
  double f1_pct = 0.0;
};

struct EvalReport {
  std::size_t samples = 0;
  std::size_t errors = 0;
  /// Test samples whose label the model has never seen; always counted wrong.
  std::size_t unknown_labels = 0;
  double error_pct = 0.0;
  double micro_f1_pct = 0.0;
  double macro_f1_pct = 0.0;
  double model_density_pct = 0.0;
  /// NaN unless filled in by the caller from a solver state.
  double alpha_density_pct = std::numeric_limits<double>::quiet_NaN();
  std::vector<ClassReport> classes;  // one per model label, in model order
};

/// Test labels are matched to model labels by name. Throws InvalidArgument
/// on an empty test set.
EvalReport evaluate(const WeightMatrix& w, const SparseDataset& test);

/// Predicted model class per test row.
std::vector<ClassId> predict_all(const WeightMatrix& w, const SparseDataset& test, std::size_t workers = 1);

/// Percentage of strictly positive dual variables over the n(C-1)
/// off-class coordinates.
double alpha_density(const LlwState& state);
double alpha_density(const WwState& state);

void write_report_csv_header(std::ostream& out);
void write_report_csv_row(const EvalReport& r, std::ostream& out);
void write_report_text(const EvalReport& r, std::ostream& out);

}  // namespace mcsvm

#endif  // MCSVM_EVAL_HPP_
