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

// Test-only references computed from first principles: dense Gram
// matrices, the dual QPs written out coordinate by coordinate, and an
// accelerated projected-gradient solver for them. Nothing here calls into
// the solver code paths it is used to check.

#ifndef MCSVM_TESTS_SUPPORT_ORACLE_HPP_
#define MCSVM_TESTS_SUPPORT_ORACLE_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "mcsvm/dataset.hpp"

namespace mcsvm::testing {

using Dense = std::vector<std::vector<double>>;

inline Dense dense_rows(const SparseDataset& ds) {
  Dense x(ds.size(), std::vector<double>(ds.dim(), 0.0));
  for (std::size_t i = 0; i < ds.size(); ++i) {
    for (const Feature& f : ds.row(i)) x[i][f.index - 1] = f.value;
  }
  return x;
}

inline Dense gram(const Dense& x) {
  Dense k(x.size(), std::vector<double>(x.size(), 0.0));
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < x.size(); ++j) {
      for (std::size_t f = 0; f < x[i].size(); ++f) k[i][j] += x[i][f] * x[j][f];
    }
  }
  return k;
}

/// maximize b'z - z'Qz/2 subject to 0 <= z <= upper.
struct BoxQp {
  Dense q;
  std::vector<double> b;
  double upper = 1.0;

  double value(const std::vector<double>& z) const {
    double v = 0.0;
    for (std::size_t a = 0; a < z.size(); ++a) {
      double qz = 0.0;
      for (std::size_t c = 0; c < z.size(); ++c) qz += q[a][c] * z[c];
      v += b[a] * z[a] - 0.5 * z[a] * qz;
    }
    return v;
  }
};

/// Largest |z - P(z + grad)|: zero exactly at a box-constrained maximizer.
inline double projected_residual(const BoxQp& p, const std::vector<double>& z) {
  double worst = 0.0;
  for (std::size_t a = 0; a < z.size(); ++a) {
    double qz = 0.0;
    for (std::size_t c = 0; c < z.size(); ++c) qz += p.q[a][c] * z[c];
    const double moved = std::clamp(z[a] + p.b[a] - qz, 0.0, p.upper) - z[a];
    worst = std::max(worst, std::fabs(moved));
  }
  return worst;
}

/// FISTA with function-value restart; returns the maximizer.
inline std::vector<double> solve_box_qp(const BoxQp& p, std::size_t max_iter = 400000) {
  const std::size_t m = p.b.size();
  double lip = 0.0;
  for (const auto& row : p.q) {
    double s = 0.0;
    for (double v : row) s += std::fabs(v);
    lip = std::max(lip, s);
  }
  if (lip == 0.0) lip = 1.0;
  const double step = 1.0 / lip;
  auto project = [&](double v) { return std::clamp(v, 0.0, p.upper); };

  std::vector<double> z(m, 0.0), y(m, 0.0), next(m), grad(m);
  double t = 1.0;
  double best = p.value(z);
  bool restarted = false;
  for (std::size_t it = 0; it < max_iter; ++it) {
    for (std::size_t a = 0; a < m; ++a) {
      double qy = 0.0;
      for (std::size_t c = 0; c < m; ++c) qy += p.q[a][c] * y[c];
      grad[a] = p.b[a] - qy;
    }
    double moved = 0.0;
    for (std::size_t a = 0; a < m; ++a) {
      next[a] = project(y[a] + step * grad[a]);
      moved = std::max(moved, std::fabs(next[a] - z[a]));
    }
    const double v = p.value(next);
    if (v < best && !restarted) {
      // restart momentum from the last iterate; the plain projected step
      // taken next is monotone up to rounding and is always accepted
      y = z;
      t = 1.0;
      restarted = true;
      continue;
    }
    restarted = false;
    best = std::max(best, v);
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    for (std::size_t a = 0; a < m; ++a) y[a] = next[a] + ((t - 1.0) / t_next) * (next[a] - z[a]);
    z.swap(next);
    t = t_next;
    if (moved < 1e-15) break;
    if (it % 64 == 0 && projected_residual(p, z) < 1e-12) break;
  }
  return z;
}

/// Off-class coordinates (i, c), c != y_i, in sample-major order.
struct Coord {
  std::size_t sample;
  ClassId cls;
};

inline std::vector<Coord> off_class_coords(const SparseDataset& ds) {
  std::vector<Coord> out;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    for (std::size_t c = 0; c < ds.num_classes(); ++c) {
      if (static_cast<ClassId>(c) != ds.label(i)) out.push_back({i, static_cast<ClassId>(c)});
    }
  }
  return out;
}

/// LLW dual with the mean vector eliminated: Q = K (x) (I - 11'/C).
inline BoxQp llw_qp(const SparseDataset& ds, double C) {
  const auto coords = off_class_coords(ds);
  const Dense k = gram(dense_rows(ds));
  const double inv = 1.0 / static_cast<double>(ds.num_classes());
  BoxQp p;
  p.upper = C;
  p.b.assign(coords.size(), 1.0);
  p.q.assign(coords.size(), std::vector<double>(coords.size(), 0.0));
  for (std::size_t a = 0; a < coords.size(); ++a) {
    for (std::size_t c = 0; c < coords.size(); ++c) {
      const double same = coords[a].cls == coords[c].cls ? 1.0 : 0.0;
      p.q[a][c] = k[coords[a].sample][coords[c].sample] * (same - inv);
    }
  }
  return p;
}

/// WW dual with alpha_{i,y_i} substituted: w_c = sum a_{(i,c'),c} alpha x_i
/// where a = [y_i = c] - [c' = c].
inline BoxQp ww_qp(const SparseDataset& ds, double C) {
  const auto coords = off_class_coords(ds);
  const Dense k = gram(dense_rows(ds));
  BoxQp p;
  p.upper = C;
  p.b.assign(coords.size(), 1.0);
  p.q.assign(coords.size(), std::vector<double>(coords.size(), 0.0));
  for (std::size_t a = 0; a < coords.size(); ++a) {
    for (std::size_t c = 0; c < coords.size(); ++c) {
      const std::size_t i = coords[a].sample, j = coords[c].sample;
      const ClassId yi = ds.label(i), yj = ds.label(j);
      const double coupling = (yi == yj) - (yi == coords[c].cls) - (coords[a].cls == yj) +
                              (coords[a].cls == coords[c].cls);
      p.q[a][c] = k[i][j] * coupling;
    }
  }
  return p;
}

/// Binary problem of class `positive` against the rest.
inline BoxQp binary_qp(const SparseDataset& ds, ClassId positive, double C) {
  const Dense k = gram(dense_rows(ds));
  BoxQp p;
  p.upper = C;
  p.b.assign(ds.size(), 1.0);
  p.q.assign(ds.size(), std::vector<double>(ds.size(), 0.0));
  for (std::size_t i = 0; i < ds.size(); ++i) {
    for (std::size_t j = 0; j < ds.size(); ++j) {
      const double si = ds.label(i) == positive ? 1.0 : -1.0;
      const double sj = ds.label(j) == positive ? 1.0 : -1.0;
      p.q[i][j] = si * sj * k[i][j];
    }
  }
  return p;
}

inline double relative_diff(double a, double b) {
  const double scale = std::max({std::fabs(a), std::fabs(b), 1e-300});
  return std::fabs(a - b) / scale;
}

}  // namespace mcsvm::testing

#endif  // MCSVM_TESTS_SUPPORT_ORACLE_HPP_
