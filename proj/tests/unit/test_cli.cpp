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

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "cli.hpp"
#include "fixtures.hpp"
#include "mcsvm/model.hpp"
#include "oracle.hpp"

namespace mcsvm {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("mcsvm-cli-" + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

struct Outcome {
  int code;
  std::string out, err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "mcsvm");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_data(const fs::path& p, const SparseDataset& ds) {
  std::ofstream f(p);
  write_libsvm(ds, f);
}

/// Stats CSV without the trailing seconds column.
std::string without_seconds(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, out;
  while (std::getline(in, line)) out += line.substr(0, line.rfind(',')) + '\n';
  return out;
}

TEST_CASE("train writes model and stats and exits 0 on convergence") {
  TempDir dir;
  write_data(dir / "toy.svm", testing::toy(40, 3, 4, 1, 6.0));
  for (std::string solver : {"llw", "ww", "ovr"}) {
    const auto r = run({"train", "--solver", solver, "--data", (dir / "toy.svm").string(), "--logC", "0",
                        "--model", (dir / (solver + ".model")).string(), "--stats",
                        (dir / (solver + ".csv")).string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("converged=1") != std::string::npos);
    CHECK(fs::exists(dir / (solver + ".model")));
    CHECK(slurp(dir / (solver + ".csv")).rfind("epoch,dual,primal,gap", 0) == 0);

    const auto e = run({"evaluate", "--model", (dir / (solver + ".model")).string(), "--data",
                        (dir / "toy.svm").string()});
    CHECK(e.code == 0);
    CHECK(e.out.find("error") != std::string::npos);
  }
}

TEST_CASE("training on separable data and evaluating on it gives no errors") {
  TempDir dir;
  write_data(dir / "sep.svm", testing::toy(30, 3, 4, 3, 30.0));
  REQUIRE(run({"train", "--solver", "ww", "--data", (dir / "sep.svm").string(), "--model",
               (dir / "m").string()}).code == 0);
  const auto e = run({"evaluate", "--model", (dir / "m").string(), "--data", (dir / "sep.svm").string(),
                      "--report", (dir / "r.csv").string()});
  CHECK(e.code == 0);
  const std::string csv = slurp(dir / "r.csv");
  CHECK(csv.find("\n30,0,0,0,") != std::string::npos);
}

TEST_CASE("epoch limit exits 2") {
  TempDir dir;
  write_data(dir / "toy.svm", testing::toy(40, 3, 4, 1, 0.5));
  const auto r = run({"train", "--solver", "llw", "--data", (dir / "toy.svm").string(), "--C", "100",
                      "--eps", "1e-9", "--max-epochs", "2"});
  CHECK(r.code == 2);
  CHECK(r.out.find("converged=0") != std::string::npos);
}

TEST_CASE("usage and IO errors exit 1") {
  TempDir dir;
  const auto missing = run({"train", "--data", (dir / "nope.svm").string()});
  CHECK(missing.code == 1);
  CHECK(missing.err.find("nope.svm") != std::string::npos);

  CHECK(run({"train"}).code == 1);
  CHECK(run({"train", "--solver", "cs", "--data", "x"}).code == 1);
  CHECK(run({"frobnicate"}).code == 1);

  write_data(dir / "toy.svm", testing::toy(10, 2, 2, 1));
  CHECK(run({"train", "--data", (dir / "toy.svm").string(), "--C", "-1"}).code == 1);
  CHECK(run({"train", "--data", (dir / "toy.svm").string(), "--C", "1", "--logC", "0"}).code == 1);

  std::ofstream(dir / "bad.model") << "not a model";
  const auto bad = run({"predict", "--model", (dir / "bad.model").string(), "--data", (dir / "toy.svm").string()});
  CHECK(bad.code == 1);
  CHECK(bad.err.find("mcsvm: error:") == 0);
}

TEST_CASE("predict writes one label per row and accepts empty input") {
  TempDir dir;
  const SparseDataset ds = testing::toy(12, 3, 3, 2, 30.0);
  write_data(dir / "toy.svm", ds);
  REQUIRE(run({"train", "--data", (dir / "toy.svm").string(), "--model", (dir / "m").string()}).code == 0);
  const auto p = run({"predict", "--model", (dir / "m").string(), "--data", (dir / "toy.svm").string()});
  CHECK(p.code == 0);
  std::string expected;
  for (std::size_t i = 0; i < ds.size(); ++i) expected += ds.dictionary().name(ds.label(i)) + "\n";
  CHECK(p.out == expected);

  std::ofstream(dir / "empty.svm") << "";
  const auto e = run({"predict", "--model", (dir / "m").string(), "--data", (dir / "empty.svm").string(),
                      "--output", (dir / "out.txt").string()});
  CHECK(e.code == 0);
  CHECK(fs::exists(dir / "out.txt"));
  CHECK(slurp(dir / "out.txt").empty());
}

TEST_CASE("repeats use consecutive seeds and agree on the objective") {
  TempDir dir;
  write_data(dir / "toy.svm", testing::toy(40, 4, 5, 7));
  const auto r = run({"train", "--solver", "ww", "--data", (dir / "toy.svm").string(), "--repeats", "3",
                      "--stats", (dir / "s.csv").string(), "--model", (dir / "m.bin").string()});
  CHECK(r.code == 0);
  std::vector<std::string> traces;
  for (int k = 1; k <= 3; ++k) {
    const fs::path p = dir / ("s.r" + std::to_string(k) + ".csv");
    REQUIRE(fs::exists(p));
    CHECK(fs::exists(dir / ("m.r" + std::to_string(k) + ".bin")));
    traces.push_back(without_seconds(slurp(p)));
  }
  CHECK(traces[0] != traces[1]);
  CHECK(r.out.find("seed=1 ") != std::string::npos);
  CHECK(r.out.find("seed=3 ") != std::string::npos);

  // final dual values agree
  std::vector<double> duals;
  std::istringstream lines(r.out);
  std::string line;
  while (std::getline(lines, line)) {
    const auto pos = line.find(" dual=");
    if (pos != std::string::npos) duals.push_back(std::stod(line.substr(pos + 6)));
  }
  REQUIRE(duals.size() == 3);
  for (double d : duals) CHECK(testing::relative_diff(d, duals[0]) <= 1e-4);
}

TEST_CASE("fixed seed gives identical statistics") {
  TempDir dir;
  write_data(dir / "toy.svm", testing::toy(40, 4, 5, 8));
  for (int k = 0; k < 2; ++k) {
    REQUIRE(run({"train", "--solver", "llw", "--data", (dir / "toy.svm").string(), "--seed", "5", "--stats",
                 (dir / ("s" + std::to_string(k) + ".csv")).string()}).code == 0);
  }
  CHECK(without_seconds(slurp(dir / "s0.csv")) == without_seconds(slurp(dir / "s1.csv")));
}

TEST_CASE("unit-variance scaling is folded into the saved model") {
  TempDir dir;
  SparseDataset ds = testing::toy(30, 3, 3, 4, 20.0);
  write_data(dir / "toy.svm", ds);
  REQUIRE(run({"train", "--data", (dir / "toy.svm").string(), "--normalize", "var", "--model",
               (dir / "m").string(), "--holdout", "0.2"}).code == 0);
  const WeightMatrix w = load_model(dir / "m");
  CHECK(w.num_classes() == 3);
  const auto e = run({"evaluate", "--model", (dir / "m").string(), "--data", (dir / "toy.svm").string()});
  CHECK(e.code == 0);
}

TEST_CASE("gap trace") {
  TempDir dir;
  write_data(dir / "toy.svm", testing::toy(30, 3, 4, 5));
  const auto r = run({"gap-trace", "--solver", "ww", "--data", (dir / "toy.svm").string()});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("epoch,dual,primal,gap,relative_gap\n0,", 0) == 0);
}

TEST_CASE("bench emits one row per worker count") {
  const auto r = run({"bench", "--solver", "llw", "--synthetic", "300,8,200,10", "--workers", "1,2,4",
                      "--epochs", "2"});
  CHECK(r.code == 0);
  std::istringstream in(r.out);
  std::string header, row;
  std::getline(in, header);
  CHECK(header == "solver,workers,nodes,epochs,seconds,speedup,dual");
  std::vector<std::string> rows;
  while (std::getline(in, row)) rows.push_back(row);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].rfind("llw,1,1,2,", 0) == 0);
  // speedup of the single-worker row is 1 by definition
  CHECK(rows[0].find(",1,") != std::string::npos);

  const auto s = run({"bench", "--dump-schedule", "4"});
  CHECK(s.code == 0);
  // header plus the six pairs of four classes
  CHECK(std::count(s.out.begin(), s.out.end(), '\n') == 7);
}

}  // namespace
}  // namespace mcsvm
