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

#include "mcsvm/dataset.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

#include "mcsvm/errors.hpp"

namespace mcsvm {

ParseError::ParseError(Kind kind, std::size_t line, const std::string& what)
    : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
      kind_(kind),
      line_(line) {}

double squared_norm(SparseRow x) {
  double s = 0.0;
  for (const Feature& f : x) s += f.value * f.value;
  return s;
}

double dot(SparseRow x, std::span<const double> w) {
  double s = 0.0;
  const std::size_t d = w.size();
  for (const Feature& f : x) {
    if (f.index > d) break;
    s += f.value * w[f.index - 1];
  }
  return s;
}

void axpy(double scale, SparseRow x, std::span<double> w) {
  const std::size_t d = w.size();
  for (const Feature& f : x) {
    if (f.index > d) break;
    w[f.index - 1] += scale * f.value;
  }
}

LabelDictionary::LabelDictionary(std::vector<std::string> names) {
  for (auto& n : names) intern(n);
}

ClassId LabelDictionary::intern(std::string_view token) {
  auto it = ids_.find(std::string(token));
  if (it != ids_.end()) return it->second;
  const auto id = static_cast<ClassId>(names_.size());
  names_.emplace_back(token);
  ids_.emplace(names_.back(), id);
  return id;
}

std::optional<ClassId> LabelDictionary::find(std::string_view token) const {
  auto it = ids_.find(std::string(token));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

Normalization parse_normalization(std::string_view text) {
  if (text == "none") return Normalization::None;
  if (text == "l2" || text == "unit_norm") return Normalization::UnitNorm;
  if (text == "var" || text == "unit_variance") return Normalization::UnitVariance;
  throw InvalidArgument("unknown normalization '" + std::string(text) + "' (none, l2, var)");
}

std::string_view to_string(Normalization mode) {
  switch (mode) {
    case Normalization::None: return "none";
    case Normalization::UnitNorm: return "l2";
    case Normalization::UnitVariance: return "var";
  }
  return "none";
}

SparseDataset::SparseDataset(std::vector<std::size_t> row_offsets, std::vector<Feature> entries,
                             std::vector<ClassId> labels, LabelDictionary dictionary,
                             std::uint32_t dim)
    : row_offsets_(std::move(row_offsets)),
      entries_(std::move(entries)),
      labels_(std::move(labels)),
      dictionary_(std::move(dictionary)),
      dim_(dim) {
  const std::size_t n = labels_.size();
  if (row_offsets_.size() != n + 1 || row_offsets_.front() != 0 ||
      row_offsets_.back() != entries_.size()) {
    throw InvalidArgument("row offsets do not match labels/entries");
  }
  const auto num_classes = static_cast<ClassId>(dictionary_.size());
  norms_.resize(n);
  class_index_.assign(dictionary_.size(), {});
  for (std::size_t i = 0; i < n; ++i) {
    if (labels_[i] < 0 || labels_[i] >= num_classes) {
      throw InvalidArgument("label id out of range at sample " + std::to_string(i));
    }
    if (row_offsets_[i + 1] < row_offsets_[i]) throw InvalidArgument("row offsets not monotone");
    std::uint32_t prev = 0;
    for (const Feature& f : row(i)) {
      if (f.index <= prev) throw InvalidArgument("feature indices must be strictly increasing");
      if (f.value == 0.0 || !std::isfinite(f.value)) {
        throw InvalidArgument("stored feature values must be finite and non-zero");
      }
      prev = f.index;
    }
    dim_ = std::max(dim_, prev);
    norms_[i] = squared_norm(row(i));
    class_index_[static_cast<std::size_t>(labels_[i])].push_back(i);
  }
}

SparseDataset SparseDataset::subset(std::span<const std::size_t> indices) const {
  std::vector<std::size_t> offsets{0};
  std::vector<Feature> entries;
  std::vector<ClassId> labels;
  offsets.reserve(indices.size() + 1);
  labels.reserve(indices.size());
  for (std::size_t i : indices) {
    SparseRow r = row(i);
    entries.insert(entries.end(), r.begin(), r.end());
    offsets.push_back(entries.size());
    labels.push_back(labels_[i]);
  }
  return SparseDataset(std::move(offsets), std::move(entries), std::move(labels), dictionary_,
                       dim_);
}

namespace {

constexpr std::uint64_t kFnvOffset = 14695981039346656037ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

void fnv_mix(std::uint64_t& h, std::uint64_t v) {
  for (int b = 0; b < 8; ++b) {
    h ^= (v >> (8 * b)) & 0xffU;
    h *= kFnvPrime;
  }
}

}  // namespace

std::uint64_t SparseDataset::fingerprint() const {
  std::uint64_t h = kFnvOffset;
  fnv_mix(h, size());
  fnv_mix(h, dim_);
  fnv_mix(h, dictionary_.size());
  for (std::size_t i = 0; i < size(); ++i) {
    fnv_mix(h, static_cast<std::uint64_t>(labels_[i]));
    fnv_mix(h, row_offsets_[i + 1] - row_offsets_[i]);
    for (const Feature& f : row(i)) {
      fnv_mix(h, f.index);
      fnv_mix(h, std::bit_cast<std::uint64_t>(f.value));
    }
  }
  return h;
}

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f'; }

std::string_view next_token(std::string_view& rest) {
  std::size_t b = 0;
  while (b < rest.size() && is_space(rest[b])) ++b;
  std::size_t e = b;
  while (e < rest.size() && !is_space(rest[e])) ++e;
  std::string_view tok = rest.substr(b, e - b);
  rest.remove_prefix(e);
  return tok;
}

}  // namespace

SparseDataset parse_libsvm(std::istream& in, const LabelDictionary* base) {
  using Kind = ParseError::Kind;
  LabelDictionary dict = base ? *base : LabelDictionary{};
  std::vector<std::size_t> offsets{0};
  std::vector<Feature> entries;
  std::vector<ClassId> labels;

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view rest(line);
    if (auto hash = rest.find('#'); hash != std::string_view::npos) rest = rest.substr(0, hash);
    std::string_view label = next_token(rest);
    if (label.empty()) continue;
    if (label.find(':') != std::string_view::npos) {
      throw ParseError(Kind::Malformed, lineno, "missing label before '" + std::string(label) + "'");
    }

    std::uint32_t prev = 0;
    for (std::string_view tok = next_token(rest); !tok.empty(); tok = next_token(rest)) {
      const auto colon = tok.find(':');
      if (colon == std::string_view::npos || colon == 0 || colon + 1 == tok.size()) {
        throw ParseError(Kind::Malformed, lineno, "expected <index>:<value>, got '" + std::string(tok) + "'");
      }
      std::uint32_t idx = 0;
      const char* ib = tok.data();
      const char* ie = tok.data() + colon;
      if (auto [p, ec] = std::from_chars(ib, ie, idx); ec != std::errc{} || p != ie || idx == 0) {
        throw ParseError(Kind::Malformed, lineno, "bad feature index '" + std::string(tok.substr(0, colon)) + "'");
      }
      double value = 0.0;
      const char* vb = ie + 1;
      const char* ve = tok.data() + tok.size();
      if (*vb == '+') ++vb;  // from_chars rejects a leading '+'
      if (auto [p, ec] = std::from_chars(vb, ve, value); ec != std::errc{} || p != ve) {
        throw ParseError(Kind::Malformed, lineno, "bad feature value '" + std::string(tok.substr(colon + 1)) + "'");
      }
      if (!std::isfinite(value)) {
        throw ParseError(Kind::NonFinite, lineno, "non-finite value at index " + std::to_string(idx));
      }
      if (idx == prev) {
        throw ParseError(Kind::DuplicateIndex, lineno, "duplicate feature index " + std::to_string(idx));
      }
      if (idx < prev) {
        throw ParseError(Kind::NonAscendingIndices, lineno,
                         "feature index " + std::to_string(idx) + " follows " + std::to_string(prev));
      }
      prev = idx;
      if (value != 0.0) entries.push_back({idx, value});
    }
    labels.push_back(dict.intern(label));
    offsets.push_back(entries.size());
  }
  if (in.bad()) throw Error("read error while parsing LIBSVM data");
  if (labels.empty()) throw ParseError(Kind::EmptyDataset, 0, "dataset contains no samples");
  return SparseDataset(std::move(offsets), std::move(entries), std::move(labels), std::move(dict));
}

SparseDataset parse_libsvm(std::string_view text, const LabelDictionary* base) {
  std::istringstream in{std::string(text)};
  return parse_libsvm(in, base);
}

SparseDataset load_libsvm(const std::filesystem::path& path, const LabelDictionary* base) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open data file " + path.string());
  try {
    return parse_libsvm(in, base);
  } catch (const ParseError& e) {
    throw ParseError(e.kind(), e.line(), path.string() + ": " + e.what());
  }
}

void write_libsvm(const SparseDataset& ds, std::ostream& out) {
  char buf[64];
  for (std::size_t i = 0; i < ds.size(); ++i) {
    out << ds.dictionary().name(ds.label(i));
    for (const Feature& f : ds.row(i)) {
      auto [p, ec] = std::to_chars(buf, buf + sizeof buf, f.value);
      out << ' ' << f.index << ':' << std::string_view(buf, static_cast<std::size_t>(p - buf));
    }
    out << '\n';
  }
}

Normalizer Normalizer::fit(const SparseDataset& train, Normalization mode) {
  Normalizer nz;
  nz.mode_ = mode;
  if (mode != Normalization::UnitVariance) return nz;

  const std::size_t d = train.dim();
  std::vector<double> sum(d, 0.0), sum_sq(d, 0.0);
  for (const Feature& f : train.entries()) {
    sum[f.index - 1] += f.value;
    sum_sq[f.index - 1] += f.value * f.value;
  }
  const auto n = static_cast<double>(train.size());
  nz.column_scale_.assign(d, 1.0);
  for (std::size_t j = 0; j < d; ++j) {
    const double mean = sum[j] / n;
    const double var = sum_sq[j] / n - mean * mean;
    // Population variance with implicit zeros; degenerate columns stay as-is.
    if (var > 0.0) nz.column_scale_[j] = 1.0 / std::sqrt(var);
  }
  return nz;
}

SparseDataset Normalizer::apply(const SparseDataset& ds) const {
  if (mode_ == Normalization::None) return ds;
  std::vector<Feature> entries(ds.entries().begin(), ds.entries().end());
  std::vector<std::size_t> offsets(ds.row_offsets().begin(), ds.row_offsets().end());
  if (mode_ == Normalization::UnitNorm) {
    for (std::size_t i = 0; i < ds.size(); ++i) {
      const double k = ds.norm(i);
      if (k <= 0.0) continue;
      const double s = 1.0 / std::sqrt(k);
      for (std::size_t e = offsets[i]; e < offsets[i + 1]; ++e) entries[e].value *= s;
    }
  } else {
    for (Feature& f : entries) {
      if (f.index <= column_scale_.size()) f.value *= column_scale_[f.index - 1];
    }
  }
  std::vector<ClassId> labels(ds.labels().begin(), ds.labels().end());
  return SparseDataset(std::move(offsets), std::move(entries), std::move(labels), ds.dictionary(),
                       ds.dim());
}

SparseDataset normalize(const SparseDataset& ds, Normalization mode) {
  return Normalizer::fit(ds, mode).apply(ds);
}

std::vector<std::size_t> shuffle_order(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  std::mt19937_64 gen(seed);
  // Explicit rejection sampling keeps the permutation identical across
  // standard libraries (uniform_int_distribution is implementation-defined).
  for (std::size_t i = n; i > 1; --i) {
    const std::uint64_t bound = i;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t r = gen();
    while (r >= limit) r = gen();
    std::swap(perm[i - 1], perm[static_cast<std::size_t>(r % bound)]);
  }
  return perm;
}

std::uint64_t epoch_seed(std::uint64_t seed, std::uint64_t epoch) {
  // splitmix64 finalizer over a combination of both inputs.
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (epoch + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::pair<SparseDataset, SparseDataset> split_holdout(const SparseDataset& ds,
                                                      double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw InvalidArgument("holdout fraction must be in (0, 1)");
  }
  const auto perm = shuffle_order(ds.size(), seed);
  const auto n_test = static_cast<std::size_t>(std::floor(static_cast<double>(ds.size()) * test_fraction));
  if (n_test == 0 || n_test == ds.size()) throw InvalidArgument("holdout split leaves an empty side");
  std::vector<std::size_t> test(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_test));
  std::vector<std::size_t> train(perm.begin() + static_cast<std::ptrdiff_t>(n_test), perm.end());
  std::sort(test.begin(), test.end());
  std::sort(train.begin(), train.end());
  return {ds.subset(train), ds.subset(test)};
}

}  // namespace mcsvm
