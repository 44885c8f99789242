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

#include <algorithm>
#include <numeric>
#include <string>

#include "dist_common.hpp"
#include "mcsvm/dist.hpp"
#include "mcsvm/errors.hpp"
#include "parallel.hpp"
#include "ww_engine.hpp"

namespace mcsvm {

namespace {

class WwNode {
 public:
  WwNode(const SparseDataset& ds, const SolverConfig& config, Transport& transport, WwObserver* observer)
      : ds_(ds),
        config_(config),
        net_(transport),
        observer_(observer),
        me_(transport.node_id()),
        bundles_(partition_classes(ds, transport.num_nodes())),
        schedule_(two_level_schedule(bundles_)),
        state_(ds, config.C) {}

  DistributedResult run();

 private:
  const Bundle& mine() const { return bundles_[me_]; }

  void objectives(double& dual, double& primal);
  std::size_t self_phase(std::size_t epoch, std::size_t section, std::size_t lane, const Phase& phase,
                         const detail::WwSweep& sweep);
  std::size_t compute_cross(std::size_t epoch, std::size_t section, std::size_t lane, const Phase& phase,
                            const detail::WwSweep& sweep);
  void lend_bundle(const Phase& phase);

  WeightEnvelope pack(const Bundle& sample_classes, const Bundle& target_classes);
  void unpack(const WeightEnvelope& env, const Bundle& sample_classes, const Bundle& target_classes,
              std::uint32_t from);

  const SparseDataset& ds_;
  const SolverConfig& config_;
  Transport& net_;
  WwObserver* observer_;
  std::uint32_t me_;
  std::vector<Bundle> bundles_;
  std::vector<SuperRound> schedule_;
  WwState state_;
};

// Weight vectors of `sample_classes` plus the alphas of their samples
// against `target_classes`.
WeightEnvelope WwNode::pack(const Bundle& sample_classes, const Bundle& target_classes) {
  WeightEnvelope env;
  for (ClassId c : sample_classes) env.weights.push_back(sparsify(static_cast<std::uint32_t>(c), state_.w(c)));
  for (ClassId y : sample_classes) {
    for (std::size_t i : ds_.class_members(y)) {
      if (ds_.norm(i) == 0.0) continue;
      for (ClassId c : target_classes) {
        env.alphas.push_back(AlphaRecord{static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(c),
                                         state_.alpha(i, c), state_.stale(i, c), state_.active(i, c)});
      }
    }
  }
  return env;
}

void WwNode::unpack(const WeightEnvelope& env, const Bundle& sample_classes, const Bundle& target_classes,
                    std::uint32_t from) {
  if (env.weights.size() != sample_classes.size()) {
    throw ProtocolError("node " + std::to_string(from) + " sent " + std::to_string(env.weights.size()) +
                        " weight vectors, expected " + std::to_string(sample_classes.size()));
  }
  for (const SparseWeightMessage& m : env.weights) {
    detail::check_member(sample_classes, m.class_id, from);
    for (const Feature& f : m.entries) {
      if (f.index > ds_.dim()) throw ProtocolError("weight index beyond the feature dimension");
    }
    densify(m, state_.w(static_cast<ClassId>(m.class_id)));
  }
  for (const AlphaRecord& r : env.alphas) {
    if (r.sample >= ds_.size()) throw ProtocolError("alpha record for an unknown sample");
    detail::check_member(sample_classes, static_cast<std::uint32_t>(ds_.label(r.sample)), from);
    detail::check_member(target_classes, r.class_id, from);
    const auto c = static_cast<ClassId>(r.class_id);
    state_.alpha_ref(r.sample, c) = r.alpha;
    state_.stale(r.sample, c) = r.stale;
    state_.active(r.sample, c) = r.active;
  }
}

std::size_t WwNode::self_phase(std::size_t epoch, std::size_t section, std::size_t lane, const Phase& phase,
                               const detail::WwSweep& sweep) {
  std::size_t moved = 0;
  for (const Round& r : phase.rounds) {
    // pairs of one round touch disjoint classes, so running them
    // concurrently gives the same result as the sequential phase
    std::vector<std::size_t> counts(r.pairs.size(), 0);
    detail::parallel_for(config_.num_workers, r.pairs.size(), [&](std::size_t k) {
      if (observer_) observer_->on_pair(epoch, section, lane, r.pairs[k]);
      counts[k] = detail::ww_process_pair(state_, r.pairs[k], sweep);
    });
    moved += std::accumulate(counts.begin(), counts.end(), std::size_t{0});
  }
  return moved;
}

std::size_t WwNode::compute_cross(std::size_t epoch, std::size_t section, std::size_t lane, const Phase& phase,
                                  const detail::WwSweep& sweep) {
  const auto partner = static_cast<std::uint32_t>(phase.bundle_b);
  const Bundle& theirs = bundles_[partner];
  unpack(decode_envelope(net_.expect(partner, MessageTag::SparseWeight).payload), theirs, mine(), partner);
  std::size_t moved = 0;
  for (const ClassPair& p : phase.pairs) {
    if (observer_) observer_->on_pair(epoch, section, lane, p);
    moved += detail::ww_process_pair(state_, p, sweep);
  }
  net_.send(partner, Message{MessageTag::SparseWeight, encode_envelope(pack(theirs, mine()))});
  return moved;
}

void WwNode::lend_bundle(const Phase& phase) {
  const auto partner = static_cast<std::uint32_t>(phase.bundle_a);
  const Bundle& theirs = bundles_[partner];
  net_.send(partner, Message{MessageTag::SparseWeight, encode_envelope(pack(mine(), theirs))});
  unpack(decode_envelope(net_.expect(partner, MessageTag::SparseWeight).payload), mine(), theirs, partner);
}

void WwNode::objectives(double& dual, double& primal) {
  // every node needs all weight vectors for the hinge terms of its samples
  const std::size_t d = ds_.dim();
  std::vector<double> all(ds_.num_classes() * d, 0.0);
  for (ClassId c : mine()) {
    const auto w = state_.w(c);
    std::copy(w.begin(), w.end(), all.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(c) * d));
  }
  net_.allreduce_sum(all);
  for (std::size_t c = 0; c < ds_.num_classes(); ++c) {
    if (std::binary_search(mine().begin(), mine().end(), static_cast<ClassId>(c))) continue;
    auto w = state_.w(static_cast<ClassId>(c));
    std::copy(all.begin() + static_cast<std::ptrdiff_t>(c * d), all.begin() + static_cast<std::ptrdiff_t>((c + 1) * d),
              w.begin());
  }
  std::vector<double> t{detail::ww_dual_terms(state_, mine(), config_.num_workers),
                        detail::ww_primal_terms(state_, mine(), config_.num_workers)};
  net_.allreduce_sum(t);
  dual = t[0];
  primal = t[1];
}

DistributedResult WwNode::run() {
  detail::Stopwatch clock;
  DistributedResult result;
  TrainStats& stats = result.stats;
  if (config_.track_objective) objectives(stats.initial_dual, stats.initial_primal);

  const ShrinkPolicy policy{config_.shrinking, static_cast<std::uint8_t>(config_.shrink_after)};
  ConvergenceControl control(config_.shrinking);
  for (std::size_t epoch = 1; epoch <= config_.max_epochs; ++epoch) {
    const bool full = control.full_pass();
    if (full) detail::ww_unshrink(state_, mine());
    const auto perm = shuffle_order(ds_.size(), epoch_seed(config_.seed, epoch));
    const auto order = detail::ww_class_orders(ds_, perm);
    const detail::WwSweep sweep{&order, config_.epsilon, policy};

    std::size_t moved = 0;
    for (std::size_t s = 0; s < schedule_.size(); ++s) {
      const auto& phases = schedule_[s].phases;
      for (std::size_t l = 0; l < phases.size(); ++l) {
        const Phase& ph = phases[l];
        if (ph.kind == Phase::Kind::Self) {
          if (ph.bundle_a == me_) moved += self_phase(epoch, s, l, ph, sweep);
        } else if (ph.bundle_a == me_) {
          moved += compute_cross(epoch, s, l, ph, sweep);
        } else if (ph.bundle_b == me_) {
          lend_bundle(ph);
        }
      }
    }

    std::vector<double> tally{static_cast<double>(moved),
                              static_cast<double>(detail::ww_active_count(state_, mine()))};
    net_.allreduce_sum(tally);
    EpochStats es;
    es.epoch = epoch;
    es.updates = static_cast<std::size_t>(tally[0]);
    es.active = static_cast<std::size_t>(tally[1]);
    es.full_pass = full;
    if (config_.track_objective) {
      objectives(es.dual, es.primal);
      es.gap = es.primal - es.dual;
    }
    es.seconds = clock.seconds();
    stats.epochs.push_back(es);
    if (control.finish_epoch(es.updates == 0)) {
      stats.converged = true;
      break;
    }
  }
  stats.seconds = clock.seconds();

  WeightMatrix local(ds_.dim(), ds_.num_classes(), ds_.dictionary().names());
  std::vector<SparseWeightMessage> msgs;
  for (ClassId c : mine()) {
    const auto w = state_.w(c);
    if (me_ == 0) {
      std::copy(w.begin(), w.end(), local.column(c).begin());
    } else {
      msgs.push_back(sparsify(static_cast<std::uint32_t>(c), w));
    }
  }
  result.model = detail::gather_model(net_, bundles_, std::move(msgs), std::move(local));
  return result;
}

}  // namespace

DistributedResult ww_distributed_train(const SparseDataset& ds, const SolverConfig& config, Transport& transport,
                                       WwObserver* observer) {
  detail::start_distributed(ds, config, transport);
  WwNode node(ds, config, transport, observer);
  return node.run();
}

}  // namespace mcsvm
