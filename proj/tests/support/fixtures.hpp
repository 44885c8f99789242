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

// Shared fixtures for the solver tests: small random problems and
// from-scratch recomputation of the solver-maintained weight vectors.

#ifndef MCSVM_TESTS_SUPPORT_FIXTURES_HPP_
#define MCSVM_TESTS_SUPPORT_FIXTURES_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "mcsvm/dataset.hpp"
#include "mcsvm/llw.hpp"
#include "mcsvm/synthetic.hpp"
#include "mcsvm/ww.hpp"
#include "oracle.hpp"

namespace mcsvm::testing {

/// Overlapping Gaussian blobs sized for the dense QP oracle.
inline SparseDataset toy(std::size_t n, std::size_t classes, std::uint32_t dim, std::uint64_t seed,
                         double separation = 1.5) {
  BlobSpec spec;
  spec.samples = n;
  spec.classes = classes;
  spec.dim = dim;
  spec.separation = separation;
  spec.spread = 1.0;
  spec.seed = seed;
  return make_blobs(spec);
}

/// Largest entry-wise difference relative to the largest magnitude seen.
inline double max_relative_error(std::span<const double> a, std::span<const double> b) {
  double diff = 0.0, scale = 1e-300;
  for (std::size_t j = 0; j < a.size(); ++j) {
    diff = std::max(diff, std::fabs(a[j] - b[j]));
    scale = std::max({scale, std::fabs(a[j]), std::fabs(b[j])});
  }
  return diff / scale;
}

/// u_c = X alpha_c - (1/C) X sum_c' alpha_c', one vector per class.
inline std::vector<std::vector<double>> llw_recompute_u(const LlwState& s) {
  const SparseDataset& ds = s.dataset();
  const std::size_t C = ds.num_classes();
  std::vector<std::vector<double>> u(C, std::vector<double>(ds.dim(), 0.0));
  std::vector<double> mean(ds.dim(), 0.0);
  for (std::size_t c = 0; c < C; ++c) {
    for (std::size_t i = 0; i < ds.size(); ++i) {
      if (ds.label(i) == static_cast<ClassId>(c)) continue;
      const double a = s.alpha(i, static_cast<ClassId>(c));
      axpy(a, ds.row(i), u[c]);
      axpy(a / static_cast<double>(C), ds.row(i), mean);
    }
  }
  for (auto& v : u) {
    for (std::size_t j = 0; j < v.size(); ++j) v[j] -= mean[j];
  }
  return u;
}

/// w_c = sum_{i: y_i = c} (sum_{c' != c} alpha_{i,c'}) x_i - sum_{i: y_i != c} alpha_{i,c} x_i.
inline std::vector<std::vector<double>> ww_recompute_w(const WwState& s) {
  const SparseDataset& ds = s.dataset();
  const std::size_t C = ds.num_classes();
  std::vector<std::vector<double>> w(C, std::vector<double>(ds.dim(), 0.0));
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const ClassId y = ds.label(i);
    double own = 0.0;
    for (std::size_t c = 0; c < C; ++c) {
      if (static_cast<ClassId>(c) == y) continue;
      const double a = s.alpha(i, static_cast<ClassId>(c));
      own += a;
      axpy(-a, ds.row(i), w[c]);
    }
    axpy(own, ds.row(i), w[static_cast<std::size_t>(y)]);
  }
  return w;
}

/// KKT band test for one coordinate with gradient g.
inline bool kkt_ok(double g, double alpha, double C, double eps) {
  if (std::fabs(g) <= eps) return true;
  if (g < -eps) return alpha == C;
  return alpha == 0.0;
}

}  // namespace mcsvm::testing

#endif  // MCSVM_TESTS_SUPPORT_FIXTURES_HPP_
