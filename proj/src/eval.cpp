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

#include "mcsvm/eval.hpp"

#include <iomanip>
#include <ostream>
#include <unordered_map>

#include "mcsvm/errors.hpp"
#include "mcsvm/llw.hpp"
#include "mcsvm/ww.hpp"
#include "parallel.hpp"

namespace mcsvm {

namespace {

double pct(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : 100.0 * static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

std::vector<ClassId> predict_all(const WeightMatrix& w, const SparseDataset& test, std::size_t workers) {
  std::vector<ClassId> out(test.size());
  detail::parallel_for(workers, test.size(), [&](std::size_t i) { out[i] = predict(w, test.row(i)); });
  return out;
}

EvalReport evaluate(const WeightMatrix& w, const SparseDataset& test) {
  if (test.size() == 0) throw InvalidArgument("cannot evaluate on an empty test set");
  const std::size_t C = w.num_classes();
  constexpr ClassId kUnknown = -1;

  // test class id -> model class id
  std::vector<ClassId> to_model(test.num_classes(), kUnknown);
  std::unordered_map<std::string, ClassId> by_name;
  for (std::size_t c = 0; c < w.label_names().size(); ++c) by_name.emplace(w.label_names()[c], static_cast<ClassId>(c));
  for (std::size_t t = 0; t < test.num_classes(); ++t) {
    if (w.label_names().empty()) {
      to_model[t] = t < C ? static_cast<ClassId>(t) : kUnknown;
    } else if (auto it = by_name.find(test.dictionary().name(static_cast<ClassId>(t))); it != by_name.end()) {
      to_model[t] = it->second;
    }
  }

  EvalReport r;
  r.samples = test.size();
  r.classes.resize(C);
  const auto predicted = predict_all(w, test);
  for (std::size_t i = 0; i < test.size(); ++i) {
    const ClassId truth = to_model[static_cast<std::size_t>(test.label(i))];
    const ClassId guess = predicted[i];
    if (truth == kUnknown) {
      ++r.unknown_labels;
      ++r.errors;
      ++r.classes[static_cast<std::size_t>(guess)].fp;
      continue;
    }
    ++r.classes[static_cast<std::size_t>(truth)].support;
    if (truth == guess) {
      ++r.classes[static_cast<std::size_t>(truth)].tp;
    } else {
      ++r.errors;
      ++r.classes[static_cast<std::size_t>(truth)].fn;
      ++r.classes[static_cast<std::size_t>(guess)].fp;
    }
  }

  std::size_t tp = 0, fp = 0, fn = r.unknown_labels;
  double f1_sum = 0.0;
  for (std::size_t c = 0; c < C; ++c) {
    ClassReport& k = r.classes[c];
    k.label = c < w.label_names().size() ? w.label_names()[c] : std::to_string(c);
    k.precision_pct = pct(k.tp, k.tp + k.fp);
    k.recall_pct = pct(k.tp, k.tp + k.fn);
    k.f1_pct = pct(2 * k.tp, 2 * k.tp + k.fp + k.fn);
    f1_sum += k.f1_pct;
    tp += k.tp;
    fp += k.fp;
    fn += k.fn;
  }
  r.error_pct = pct(r.errors, r.samples);
  r.micro_f1_pct = pct(2 * tp, 2 * tp + fp + fn);
  r.macro_f1_pct = C == 0 ? 0.0 : f1_sum / static_cast<double>(C);
  r.model_density_pct = density(w);
  return r;
}

double alpha_density(const LlwState& state) {
  const SparseDataset& ds = state.dataset();
  const std::size_t C = state.num_classes();
  if (ds.size() == 0 || C < 2) return 0.0;
  std::size_t positive = 0;
  for (std::size_t s = 0; s < state.owned_classes().size(); ++s) {
    for (double a : state.alpha_slot(s)) positive += a > 0.0 ? 1 : 0;
  }
  return pct(positive, ds.size() * (C - 1));
}

double alpha_density(const WwState& state) {
  const SparseDataset& ds = state.dataset();
  const std::size_t C = state.num_classes();
  if (ds.size() == 0 || C < 2) return 0.0;
  std::size_t positive = 0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    for (std::size_t c = 0; c < C; ++c) positive += state.alpha(i, static_cast<ClassId>(c)) > 0.0 ? 1 : 0;
  }
  return pct(positive, ds.size() * (C - 1));
}

void write_report_csv_header(std::ostream& out) {
  out << "samples,errors,unknown_labels,error_pct,micro_f1_pct,macro_f1_pct,model_density_pct,alpha_density_pct\n";
}

void write_report_csv_row(const EvalReport& r, std::ostream& out) {
  const auto old = out.precision(10);
  out << r.samples << ',' << r.errors << ',' << r.unknown_labels << ',' << r.error_pct << ',' << r.micro_f1_pct
      << ',' << r.macro_f1_pct << ',' << r.model_density_pct << ',';
  if (r.alpha_density_pct == r.alpha_density_pct) out << r.alpha_density_pct;
  out << '\n';
  out.precision(old);
}

void write_report_text(const EvalReport& r, std::ostream& out) {
  const auto flags = out.flags();
  const auto old = out.precision();
  out << std::fixed << std::setprecision(2);
  out << "samples          " << r.samples << '\n'
      << "errors           " << r.errors << '\n';
  if (r.unknown_labels) out << "unknown labels   " << r.unknown_labels << '\n';
  out << "error %          " << r.error_pct << '\n'
      << "micro-F1 %       " << r.micro_f1_pct << '\n'
      << "macro-F1 %       " << r.macro_f1_pct << '\n'
      << "model density %  " << r.model_density_pct << '\n';
  if (r.alpha_density_pct == r.alpha_density_pct) out << "alpha density %  " << r.alpha_density_pct << '\n';
  out << "\nclass      support  precision  recall  F1\n";
  for (const ClassReport& k : r.classes) {
    out << std::left << std::setw(10) << k.label << std::right << std::setw(8) << k.support << std::setw(11)
        << k.precision_pct << std::setw(8) << k.recall_pct << std::setw(7) << k.f1_pct << '\n';
  }
  out.flags(flags);
  out.precision(old);
}

}  // namespace mcsvm
