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

#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "mcsvm/dataset.hpp"
#include "mcsvm/dist.hpp"
#include "mcsvm/errors.hpp"
#include "mcsvm/eval.hpp"
#include "mcsvm/llw.hpp"
#include "mcsvm/model.hpp"
#include "mcsvm/ovr.hpp"
#include "mcsvm/sched.hpp"
#include "mcsvm/synthetic.hpp"
#include "mcsvm/transport.hpp"
#include "mcsvm/ww.hpp"

namespace mcsvm::cli {

namespace {

namespace fs = std::filesystem;

enum class Level { Quiet = 0, Info = 1, Debug = 2 };

Level log_level() {
  const char* env = std::getenv("MCSVM_LOG");
  if (env == nullptr) return Level::Info;
  const std::string v = env;
  if (v == "0" || v == "quiet" || v == "off") return Level::Quiet;
  if (v == "2" || v == "debug") return Level::Debug;
  return Level::Info;
}

class Log {
 public:
  explicit Log(std::ostream& err) : err_(err), level_(log_level()) {}
  std::ostream* at(Level l) { return level_ >= l ? &err_ : nullptr; }
  template <class... Args>
  void info(const Args&... args) { emit(Level::Info, args...); }
  template <class... Args>
  void debug(const Args&... args) { emit(Level::Debug, args...); }

 private:
  template <class... Args>
  void emit(Level l, const Args&... args) {
    if (level_ < l) return;
    err_ << "mcsvm: ";
    (err_ << ... << args);
    err_ << '\n';
  }
  std::ostream& err_;
  Level level_;
};

struct TrainOptions {
  std::string solver = "ww";
  std::string data;
  std::string test;
  double holdout = 0.0;
  std::uint64_t split_seed = 1;
  std::optional<double> log_c;
  std::optional<double> c;
  double eps = 1e-3;
  std::uint64_t seed = 1;
  std::size_t workers = 1;
  std::string nodes;
  std::uint32_t rank = 0;
  double timeout = 60.0;
  std::string normalize = "none";
  std::size_t max_epochs = 1000000;
  bool no_shrink = false;
  std::string model;
  std::string stats;
  std::string report;
  std::size_t repeats = 1;
};

void add_train_options(CLI::App* cmd, TrainOptions& o, bool with_outputs) {
  cmd->add_option("--solver", o.solver, "llw, ww or ovr")->check(CLI::IsMember({"llw", "ww", "ovr"}));
  cmd->add_option("--data", o.data, "training data (LIBSVM format)")->required();
  cmd->add_option("--test", o.test, "test data, evaluated after training");
  cmd->add_option("--holdout", o.holdout, "hold out this fraction of --data as test set")
      ->check(CLI::Range(0.0, 0.9));
  cmd->add_option("--split-seed", o.split_seed, "seed of the holdout split");
  auto* logc = cmd->add_option("--logC", o.log_c, "regularization as log10(C)");
  auto* c = cmd->add_option("--C", o.c, "regularization C");
  logc->excludes(c);
  c->excludes(logc);
  cmd->add_option("--eps", o.eps, "KKT tolerance");
  cmd->add_option("--seed", o.seed, "shuffle seed");
  cmd->add_option("--workers", o.workers, "worker threads per node")->check(CLI::PositiveNumber);
  cmd->add_option("--nodes", o.nodes, "host:port of every node, comma separated, for a TCP run");
  cmd->add_option("--rank", o.rank, "index of this process in --nodes");
  cmd->add_option("--timeout", o.timeout, "seconds to wait for peers to connect");
  cmd->add_option("--normalize", o.normalize, "none, l2 or var")->check(CLI::IsMember({"none", "l2", "var"}));
  cmd->add_option("--max-epochs", o.max_epochs, "epoch limit")->check(CLI::PositiveNumber);
  cmd->add_flag("--no-shrink", o.no_shrink, "disable shrinking");
  cmd->add_option("--stats", o.stats, "per-epoch statistics CSV");
  if (with_outputs) {
    cmd->add_option("--model", o.model, "model output path");
    cmd->add_option("--report", o.report, "evaluation CSV output path");
    cmd->add_option("--repeats", o.repeats, "independent runs with seeds seed, seed+1, ...")
        ->check(CLI::PositiveNumber);
  }
}

double regularization(const TrainOptions& o) {
  if (o.log_c) return std::pow(10.0, *o.log_c);
  return o.c.value_or(1.0);
}

SolverConfig make_config(const TrainOptions& o) {
  SolverConfig cfg;
  cfg.C = regularization(o);
  cfg.epsilon = o.eps;
  cfg.seed = o.seed;
  cfg.num_workers = o.workers;
  cfg.max_epochs = o.max_epochs;
  cfg.shrinking = !o.no_shrink;
  cfg.validate();
  return cfg;
}

struct EmptyInput : Error {
  using Error::Error;
};

SparseDataset load(const std::string& path, const LabelDictionary* base = nullptr) {
  if (!fs::exists(path)) throw Error("cannot open data file '" + path + "': no such file");
  try {
    return load_libsvm(path, base);
  } catch (const ParseError& e) {
    if (e.kind() == ParseError::Kind::EmptyDataset) throw EmptyInput("data file '" + path + "' has no samples");
    throw Error(path + ":" + std::to_string(e.line()) + ": " + e.what());
  }
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct Data {
  SparseDataset train;  // normalized
  std::optional<SparseDataset> test;  // raw
  Normalizer normalizer;
};

Data prepare(const TrainOptions& o, Log& log) {
  SparseDataset raw = load(o.data);
  std::optional<SparseDataset> test;
  if (o.holdout > 0.0) {
    if (!o.test.empty()) throw InvalidArgument("--holdout and --test are mutually exclusive");
    auto [tr, te] = split_holdout(raw, o.holdout, o.split_seed);
    raw = std::move(tr);
    test = std::move(te);
  } else if (!o.test.empty()) {
    test = load(o.test, &raw.dictionary());
  }
  const Normalizer norm = Normalizer::fit(raw, parse_normalization(o.normalize));
  log.info("loaded ", raw.size(), " training samples, ", raw.num_classes(), " classes, dim ", raw.dim(),
           test ? ", " + std::to_string(test->size()) + " test samples" : std::string());
  return Data{norm.apply(raw), std::move(test), norm};
}

// Folds per-column scaling into the weights so the model applies to raw data.
// Per-row scaling (l2) does not change the argmax and needs nothing.
WeightMatrix fold(WeightMatrix w, const Normalizer& norm) {
  const auto scale = norm.column_scale();
  if (scale.empty()) return w;
  for (std::size_t c = 0; c < w.num_classes(); ++c) {
    auto col = w.column(static_cast<ClassId>(c));
    for (std::size_t j = 0; j < col.size() && j < scale.size(); ++j) col[j] *= scale[j];
  }
  return w;
}

struct Run {
  std::optional<WeightMatrix> model;
  TrainStats stats;
  double alpha_density_pct = std::numeric_limits<double>::quiet_NaN();
};

Run train_local(const std::string& solver, const SparseDataset& ds, const SolverConfig& cfg) {
  if (solver == "llw") {
    auto r = llw_train(ds, cfg);
    return Run{std::move(r.weights), std::move(r.stats), alpha_density(r.state)};
  }
  if (solver == "ww") {
    auto r = ww_train(ds, cfg);
    return Run{std::move(r.weights), std::move(r.stats), alpha_density(r.state)};
  }
  auto r = ovr_train(ds, cfg);
  return Run{std::move(r.weights), std::move(r.stats)};
}

class Cluster {
 public:
  Cluster(const TrainOptions& o, std::uint64_t dataset_hash, Log& log) {
    const auto endpoints = split_list(o.nodes);
    if (o.rank >= endpoints.size()) throw InvalidArgument("--rank must index into --nodes");
    const auto [host, port] = parse_endpoint(endpoints[o.rank]);
    listener_ = std::make_unique<TcpListener>(host, port);
    log.info("node ", o.rank, " of ", endpoints.size(), " listening on ", host, ":", listener_->port());
    transport_ = TcpTransport::connect(o.rank, endpoints, dataset_hash, *listener_,
                                       std::chrono::milliseconds(static_cast<long long>(o.timeout * 1000)));
  }
  Transport& transport() { return *transport_; }

 private:
  std::unique_ptr<TcpListener> listener_;
  std::unique_ptr<TcpTransport> transport_;
};

Run train_distributed(const std::string& solver, const SparseDataset& ds, const SolverConfig& cfg, Cluster& cluster) {
  DistributedResult r = solver == "llw" ? llw_distributed_train(ds, cfg, cluster.transport())
                                        : ww_distributed_train(ds, cfg, cluster.transport());
  return Run{std::move(r.model), std::move(r.stats)};
}

fs::path repeat_path(const std::string& path, std::size_t k, std::size_t repeats) {
  fs::path p(path);
  if (repeats <= 1) return p;
  fs::path out = p.parent_path() / p.stem();
  out += ".r" + std::to_string(k + 1);
  out += p.extension();
  return out;
}

void write_stats_file(const fs::path& path, const TrainStats& stats) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write stats file '" + path.string() + "'");
  write_stats_csv(stats, f);
  if (!f) throw Error("error writing stats file '" + path.string() + "'");
}

void summarize(std::ostream& out, const std::string& solver, double C, std::uint64_t seed, const TrainStats& s) {
  const auto old = out.precision(12);
  out << "solver=" << solver << " C=" << C << " seed=" << seed << " epochs=" << s.epochs.size()
      << " converged=" << (s.converged ? 1 : 0);
  if (!s.epochs.empty()) {
    const EpochStats& e = s.epochs.back();
    out << " dual=" << e.dual << " primal=" << e.primal << " gap=" << e.gap;
  }
  out << " seconds=" << s.seconds << '\n';
  out.precision(old);
}

void log_epochs(Log& log, const TrainStats& s) {
  for (const EpochStats& e : s.epochs) {
    log.debug("epoch ", e.epoch, " dual ", e.dual, " gap ", e.gap, " active ", e.active, " updates ", e.updates,
              e.full_pass ? " (full pass)" : "");
  }
}

int cmd_train(const TrainOptions& o, std::ostream& out, Log& log) {
  const Data data = prepare(o, log);
  std::optional<Cluster> cluster;
  if (!o.nodes.empty()) {
    if (o.solver == "ovr") throw InvalidArgument("distributed training supports llw and ww only");
    cluster.emplace(o, data.train.fingerprint(), log);
  }
  const bool leader = !cluster || o.rank == 0;

  bool all_converged = true;
  for (std::size_t k = 0; k < o.repeats; ++k) {
    TrainOptions ok = o;
    ok.seed = o.seed + k;
    const SolverConfig cfg = make_config(ok);
    Run run = cluster ? train_distributed(o.solver, data.train, cfg, *cluster) : train_local(o.solver, data.train, cfg);
    all_converged = all_converged && run.stats.converged;
    log_epochs(log, run.stats);
    if (!leader) continue;
    summarize(out, o.solver, cfg.C, cfg.seed, run.stats);
    if (!run.stats.converged) log.info("epoch limit reached before convergence (seed ", cfg.seed, ")");
    if (!o.stats.empty()) write_stats_file(repeat_path(o.stats, k, o.repeats), run.stats);
    const WeightMatrix model = fold(std::move(*run.model), data.normalizer);
    if (!o.model.empty()) save_model(model, repeat_path(o.model, k, o.repeats));
    if (data.test) {
      EvalReport rep = evaluate(model, *data.test);
      rep.alpha_density_pct = run.alpha_density_pct;
      write_report_text(rep, out);
      if (!o.report.empty()) {
        const fs::path p = repeat_path(o.report, k, o.repeats);
        std::ofstream f(p);
        if (!f) throw Error("cannot write report file '" + p.string() + "'");
        write_report_csv_header(f);
        write_report_csv_row(rep, f);
      }
    }
  }
  return all_converged ? 0 : 2;
}

int cmd_gap_trace(const TrainOptions& o, std::ostream& out, Log& log) {
  const Data data = prepare(o, log);
  const SolverConfig cfg = make_config(o);
  Run run = train_local(o.solver, data.train, cfg);
  if (!o.stats.empty()) write_stats_file(o.stats, run.stats);
  const double initial = run.stats.initial_primal - run.stats.initial_dual;
  const auto old = out.precision(17);
  out << "epoch,dual,primal,gap,relative_gap\n";
  out << 0 << ',' << run.stats.initial_dual << ',' << run.stats.initial_primal << ',' << initial << ",1\n";
  for (const EpochStats& e : run.stats.epochs) {
    out << e.epoch << ',' << e.dual << ',' << e.primal << ',' << e.gap << ',' << e.gap / initial << '\n';
  }
  out.precision(old);
  return run.stats.converged ? 0 : 2;
}

struct PredictOptions {
  std::string model;
  std::string data;
  std::string output;
  std::string report;
};

WeightMatrix read_model(const std::string& path) {
  if (!fs::exists(path)) throw Error("cannot open model file '" + path + "': no such file");
  try {
    return load_model(fs::path(path));
  } catch (const ModelFormatError& e) {
    throw Error("model file '" + path + "': " + e.what());
  }
}

int cmd_predict(const PredictOptions& o, std::ostream& out) {
  const WeightMatrix w = read_model(o.model);
  std::optional<SparseDataset> ds;
  try {
    ds = load(o.data);
  } catch (const EmptyInput&) {
    // nothing to predict
  }
  std::ofstream file;
  std::ostream* sink = &out;
  if (!o.output.empty()) {
    file.open(o.output);
    if (!file) throw Error("cannot write predictions to '" + o.output + "'");
    sink = &file;
  }
  if (!ds) return 0;
  for (ClassId c : predict_all(w, *ds)) {
    *sink << (static_cast<std::size_t>(c) < w.label_names().size() ? w.label_names()[static_cast<std::size_t>(c)]
                                                                     : std::to_string(c))
          << '\n';
  }
  return 0;
}

int cmd_evaluate(const PredictOptions& o, std::ostream& out) {
  const WeightMatrix w = read_model(o.model);
  const LabelDictionary dict(w.label_names());
  const SparseDataset ds = load(o.data, &dict);
  const EvalReport rep = evaluate(w, ds);
  write_report_text(rep, out);
  if (!o.report.empty()) {
    std::ofstream f(o.report);
    if (!f) throw Error("cannot write report file '" + o.report + "'");
    write_report_csv_header(f);
    write_report_csv_row(rep, f);
  }
  return 0;
}

struct BenchOptions {
  std::string solver = "llw";
  std::string data;
  std::string synthetic = "20000,64,10000,40";
  std::string workers = "1,2,4";
  std::size_t epochs = 10;
  double c = 1.0;
  std::uint64_t seed = 1;
  std::size_t repeats = 1;
  std::string dump_schedule;
  std::string output;
};

void dump_schedule(const BenchOptions& o, std::ostream& out) {
  const auto parts = split_list(o.dump_schedule);
  if (parts.empty() || parts.size() > 2) throw InvalidArgument("--dump-schedule takes C or C,workers");
  const std::size_t C = std::stoul(parts[0]);
  const std::size_t k = parts.size() == 2 ? std::stoul(parts[1]) : 1;
  out << "super_round,phase,kind,bundle_a,bundle_b,round,class_a,class_b\n";
  if (k <= 1) {
    const Schedule s = build_schedule(C);
    for (std::size_t r = 0; r < s.size(); ++r) {
      for (const ClassPair& p : s[r].pairs) out << r << ",0,flat,0,0," << r << ',' << p.first << ',' << p.second << '\n';
      for (ClassId b : s[r].byes) out << r << ",0,bye,0,0," << r << ',' << b << ',' << b << '\n';
    }
    return;
  }
  const auto bundles = chunk_classes(C, k);
  const auto rounds = two_level_schedule(bundles);
  for (std::size_t sr = 0; sr < rounds.size(); ++sr) {
    for (std::size_t ph = 0; ph < rounds[sr].phases.size(); ++ph) {
      const Phase& p = rounds[sr].phases[ph];
      const char* kind = p.kind == Phase::Kind::Self ? "self" : "cross";
      if (p.kind == Phase::Kind::Self) {
        for (std::size_t r = 0; r < p.rounds.size(); ++r) {
          for (const ClassPair& q : p.rounds[r].pairs) {
            out << sr << ',' << ph << ',' << kind << ',' << p.bundle_a << ',' << p.bundle_b << ',' << r << ','
                << q.first << ',' << q.second << '\n';
          }
        }
      } else {
        for (const ClassPair& q : p.pairs) {
          out << sr << ',' << ph << ',' << kind << ',' << p.bundle_a << ',' << p.bundle_b << ",0," << q.first
              << ',' << q.second << '\n';
        }
      }
    }
  }
}

int cmd_bench(const BenchOptions& o, std::ostream& out, Log& log) {
  std::ofstream file;
  std::ostream* sink = &out;
  if (!o.output.empty()) {
    file.open(o.output);
    if (!file) throw Error("cannot write '" + o.output + "'");
    sink = &file;
  }
  if (!o.dump_schedule.empty()) {
    dump_schedule(o, *sink);
    return 0;
  }
  SparseDataset ds;
  if (!o.data.empty()) {
    ds = load(o.data);
  } else {
    const auto p = split_list(o.synthetic);
    if (p.size() != 4) throw InvalidArgument("--synthetic takes n,C,d,nnz");
    SparseSpec spec;
    spec.samples = std::stoul(p[0]);
    spec.classes = std::stoul(p[1]);
    spec.dim = static_cast<std::uint32_t>(std::stoul(p[2]));
    spec.nnz_per_row = std::stoul(p[3]);
    spec.topic_features = std::min<std::size_t>(spec.dim, 4 * spec.nnz_per_row);
    spec.seed = o.seed;
    ds = make_sparse(spec);
  }
  log.info("bench: ", ds.size(), " samples, ", ds.num_classes(), " classes, dim ", ds.dim(), ", ", o.epochs,
           " epochs");
  const auto grid = split_list(o.workers);
  if (grid.empty()) throw InvalidArgument("--workers grid is empty");
  const auto old = sink->precision(10);
  *sink << "solver,workers,nodes,epochs,seconds,speedup,dual\n";
  double base = 0.0;
  for (const std::string& g : grid) {
    SolverConfig cfg;
    cfg.C = o.c;
    cfg.seed = o.seed;
    cfg.num_workers = std::stoul(g);
    cfg.max_epochs = o.epochs;
    cfg.shrinking = false;
    cfg.track_objective = false;
    double best = std::numeric_limits<double>::infinity();
    double dual = 0.0;
    for (std::size_t r = 0; r < std::max<std::size_t>(o.repeats, 1); ++r) {
      if (o.solver == "llw") {
        auto res = llw_train(ds, cfg);
        best = std::min(best, res.stats.seconds);
        dual = llw_dual_objective(res.state);
      } else if (o.solver == "ww") {
        auto res = ww_train(ds, cfg);
        best = std::min(best, res.stats.seconds);
        dual = ww_dual_objective(res.state);
      } else {
        auto res = ovr_train(ds, cfg);
        best = std::min(best, res.stats.seconds);
        dual = 0.0;
        for (std::size_t c = 0; c < ds.num_classes(); ++c) dual += ovr_dual_objective(res.state, static_cast<ClassId>(c));
      }
    }
    if (base == 0.0) base = best;
    *sink << o.solver << ',' << cfg.num_workers << ",1," << o.epochs << ',' << best << ',' << base / best << ','
          << dual << '\n';
  }
  sink->precision(old);
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-class linear SVM training (LLW, WW, one-vs-rest)", "mcsvm"};
  app.require_subcommand(1);

  TrainOptions train_opts;
  auto* train = app.add_subcommand("train", "train a model");
  add_train_options(train, train_opts, true);

  TrainOptions gap_opts;
  auto* gap = app.add_subcommand("gap-trace", "train and print the duality gap per epoch");
  add_train_options(gap, gap_opts, false);

  PredictOptions predict_opts;
  auto* predict = app.add_subcommand("predict", "write one predicted label per input row");
  predict->add_option("--model", predict_opts.model, "model file")->required();
  predict->add_option("--data", predict_opts.data, "input data (LIBSVM format)")->required();
  predict->add_option("--output", predict_opts.output, "output path (default stdout)");

  PredictOptions eval_opts;
  auto* evaluate = app.add_subcommand("evaluate", "error, F1 scores and density of a model on labelled data");
  evaluate->add_option("--model", eval_opts.model, "model file")->required();
  evaluate->add_option("--data", eval_opts.data, "test data (LIBSVM format)")->required();
  evaluate->add_option("--report", eval_opts.report, "CSV report path");

  BenchOptions bench_opts;
  auto* bench = app.add_subcommand("bench", "fixed-epoch timing over a worker grid");
  bench->add_option("--solver", bench_opts.solver, "llw, ww or ovr")->check(CLI::IsMember({"llw", "ww", "ovr"}));
  bench->add_option("--data", bench_opts.data, "data file; synthetic data when absent");
  bench->add_option("--synthetic", bench_opts.synthetic, "n,C,d,nnz of the synthetic data");
  bench->add_option("--workers", bench_opts.workers, "comma separated worker counts");
  bench->add_option("--epochs", bench_opts.epochs, "epochs per run")->check(CLI::PositiveNumber);
  bench->add_option("--C", bench_opts.c, "regularization C");
  bench->add_option("--seed", bench_opts.seed, "seed");
  bench->add_option("--repeats", bench_opts.repeats, "runs per worker count, fastest is reported");
  bench->add_option("--dump-schedule", bench_opts.dump_schedule, "print the schedule for C[,workers] as CSV");
  bench->add_option("--output", bench_opts.output, "CSV output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 1;
  }

  Log log(err);
  try {
    if (*train) return cmd_train(train_opts, out, log);
    if (*gap) return cmd_gap_trace(gap_opts, out, log);
    if (*predict) return cmd_predict(predict_opts, out);
    if (*evaluate) return cmd_evaluate(eval_opts, out);
    if (*bench) return cmd_bench(bench_opts, out, log);
  } catch (const std::exception& e) {
    err << "mcsvm: error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace mcsvm::cli
