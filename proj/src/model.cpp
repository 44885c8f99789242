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

#include "mcsvm/model.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "mcsvm/errors.hpp"
#include "mcsvm/wire.hpp"

namespace mcsvm {

namespace {

constexpr char kMagic[6] = {'M', 'C', 'S', 'V', 'M', '1'};

}  // namespace

WeightMatrix::WeightMatrix(std::uint32_t dim, std::size_t num_classes,
                           std::vector<std::string> label_names)
    : dim_(dim),
      num_classes_(num_classes),
      label_names_(std::move(label_names)),
      data_(static_cast<std::size_t>(dim) * num_classes, 0.0) {
  if (label_names_.empty()) {
    for (std::size_t c = 0; c < num_classes; ++c) label_names_.push_back(std::to_string(c));
  }
  if (label_names_.size() != num_classes) throw InvalidArgument("label table size differs from class count");
}

ClassId predict(const WeightMatrix& w, SparseRow x) {
  ClassId best = 0;
  double best_score = -INFINITY;
  for (std::size_t c = 0; c < w.num_classes(); ++c) {
    const double s = w.score(static_cast<ClassId>(c), x);
    if (s > best_score) {
      best_score = s;
      best = static_cast<ClassId>(c);
    }
  }
  return best;
}

double density(const WeightMatrix& w, double threshold) {
  const auto values = w.data();
  if (values.empty()) return 0.0;
  std::size_t count = 0;
  for (double v : values) count += std::fabs(v) > threshold ? 1 : 0;
  return 100.0 * static_cast<double>(count) / static_cast<double>(values.size());
}

void save_model(const WeightMatrix& w, std::ostream& out) {
  ByteWriter bw;
  bw.put_bytes(std::as_bytes(std::span(kMagic)));
  bw.put_u32(w.dim());
  bw.put_u32(static_cast<std::uint32_t>(w.num_classes()));
  for (const auto& name : w.label_names()) {
    bw.put_u32(static_cast<std::uint32_t>(name.size()));
    bw.put_bytes(std::as_bytes(std::span(name.data(), name.size())));
  }
  for (std::size_t c = 0; c < w.num_classes(); ++c) {
    const auto col = w.column(static_cast<ClassId>(c));
    std::uint64_t nnz = 0;
    for (double v : col) nnz += std::bit_cast<std::uint64_t>(v) != 0 ? 1 : 0;
    bw.put_u64(nnz);
    for (std::size_t j = 0; j < col.size(); ++j) {
      if (std::bit_cast<std::uint64_t>(col[j]) == 0) continue;
      bw.put_u32(static_cast<std::uint32_t>(j + 1));
      bw.put_f64(col[j]);
    }
  }
  const auto& bytes = bw.bytes();
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("failed to write model");
}

WeightMatrix load_model(std::istream& in) {
  std::vector<std::byte> bytes;
  char buf[1 << 16];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    const auto* p = reinterpret_cast<const std::byte*>(buf);
    bytes.insert(bytes.end(), p, p + in.gcount());
  }

  using Kind = ModelFormatError::Kind;
  if (bytes.size() < sizeof kMagic ||
      !std::equal(std::begin(kMagic), std::end(kMagic), reinterpret_cast<const char*>(bytes.data()))) {
    throw ModelFormatError(Kind::BadHeader, "not a model file (bad magic)");
  }
  try {
    ByteReader br{std::span<const std::byte>(bytes).subspan(sizeof kMagic)};
    const std::uint32_t dim = br.get_u32();
    const std::uint32_t num_classes = br.get_u32();
    if (num_classes == 0) throw ModelFormatError(Kind::Corrupt, "model has no classes");
    std::vector<std::string> names;
    names.reserve(num_classes);
    for (std::uint32_t c = 0; c < num_classes; ++c) {
      const std::uint32_t len = br.get_u32();
      const auto raw = br.get_bytes(len);
      names.emplace_back(reinterpret_cast<const char*>(raw.data()), raw.size());
    }
    // Reject absurd sizes before allocating.
    if (static_cast<std::uint64_t>(dim) * num_classes > (std::uint64_t{1} << 34)) {
      throw ModelFormatError(Kind::Corrupt, "model dimensions too large");
    }
    WeightMatrix w(dim, num_classes, std::move(names));
    for (std::uint32_t c = 0; c < num_classes; ++c) {
      const std::uint64_t nnz = br.get_u64();
      if (nnz > dim) throw ModelFormatError(Kind::Corrupt, "class vector has more entries than d");
      auto col = w.column(static_cast<ClassId>(c));
      for (std::uint64_t k = 0; k < nnz; ++k) {
        const std::uint32_t idx = br.get_u32();
        const double v = br.get_f64();
        if (idx == 0 || idx > dim) throw ModelFormatError(Kind::Corrupt, "feature index out of range");
        if (!std::isfinite(v)) throw ModelFormatError(Kind::Corrupt, "non-finite weight");
        col[idx - 1] = v;
      }
    }
    if (!br.empty()) throw ModelFormatError(Kind::Corrupt, "trailing bytes after model");
    return w;
  } catch (const ProtocolError& e) {
    throw ModelFormatError(Kind::Truncated, std::string("truncated model: ") + e.what());
  }
}

void save_model(const WeightMatrix& w, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  save_model(w, out);
}

WeightMatrix load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open model file " + path.string());
  return load_model(in);
}

}  // namespace mcsvm
