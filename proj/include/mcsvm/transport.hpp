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

#ifndef MCSVM_TRANSPORT_HPP_
#define MCSVM_TRANSPORT_HPP_

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "mcsvm/wire.hpp"

namespace mcsvm {

/// Point-to-point channel between a fixed set of nodes. Messages between an
/// ordered pair of nodes arrive in order, exactly once. All calls on one
/// node must come from a single thread.
class Transport {
 public:
  virtual ~Transport() = default;

  virtual std::uint32_t node_id() const = 0;
  virtual std::uint32_t num_nodes() const = 0;

  virtual void send(std::uint32_t peer, Message msg) = 0;
  /// Blocks for the next message from `peer`. A Shutdown message from the
  /// peer surfaces as TransportError.
  virtual Message receive(std::uint32_t peer) = 0;

  /// Receives from `peer` and checks the tag (ProtocolError otherwise).
  Message expect(std::uint32_t peer, MessageTag tag);

  void barrier();
  /// Element-wise sum over all nodes, written back into `data`. Node 0
  /// accumulates contributions in ascending node order and broadcasts the
  /// result, so every node ends with the same bits.
  void allreduce_sum(std::span<double> data);

  /// Doubles per allreduce chunk frame.
  static constexpr std::size_t kChunkDoubles = std::size_t{1} << 16;
};

/// Fails on every node unless all nodes report the same dataset hash.
void verify_dataset(Transport& transport, std::uint64_t dataset_hash);

/// In-process transport for tests and threads: one queue per ordered pair.
class InProcHub {
 public:
  explicit InProcHub(std::uint32_t num_nodes);
  ~InProcHub();

  std::uint32_t num_nodes() const noexcept { return num_nodes_; }
  /// Endpoint of one node; call once per node id.
  std::unique_ptr<Transport> connect(std::uint32_t node_id);

 private:
  friend class InProcTransport;
  struct Queue {
    std::mutex mu;
    std::condition_variable cv;
    std::deque<Message> items;
  };
  Queue& queue(std::uint32_t from, std::uint32_t to) { return *queues_[from * num_nodes_ + to]; }

  std::uint32_t num_nodes_;
  std::vector<std::unique_ptr<Queue>> queues_;
};

/// Accepting socket of a TCP node. Port 0 picks an ephemeral port.
class TcpListener {
 public:
  explicit TcpListener(const std::string& host = "127.0.0.1", std::uint16_t port = 0);
  ~TcpListener();
  TcpListener(const TcpListener&) = delete;
  TcpListener& operator=(const TcpListener&) = delete;

  std::uint16_t port() const noexcept { return port_; }
  int fd() const noexcept { return fd_; }

 private:
  int fd_ = -1;
  std::uint16_t port_ = 0;
};

/// Full-mesh TCP transport. Node i dials every node j < i at endpoints[j]
/// ("host:port") and accepts every node j > i on `listener`. Each
/// connection starts with a handshake; a protocol version or dataset hash
/// mismatch aborts with TransportError.
class TcpTransport final : public Transport {
 public:
  static std::unique_ptr<TcpTransport> connect(std::uint32_t node_id, const std::vector<std::string>& endpoints,
                                               std::uint64_t dataset_hash, TcpListener& listener,
                                               std::chrono::milliseconds timeout = std::chrono::seconds(30));
  ~TcpTransport() override;

  std::uint32_t node_id() const override { return node_id_; }
  std::uint32_t num_nodes() const override { return static_cast<std::uint32_t>(fds_.size()); }
  void send(std::uint32_t peer, Message msg) override;
  Message receive(std::uint32_t peer) override;

 private:
  TcpTransport(std::uint32_t node_id, std::vector<int> fds) : node_id_(node_id), fds_(std::move(fds)) {}
  int peer_fd(std::uint32_t peer) const;

  std::uint32_t node_id_;
  std::vector<int> fds_;  // indexed by peer id, -1 for self
};

/// Splits "host:port".
std::pair<std::string, std::uint16_t> parse_endpoint(const std::string& endpoint);

}  // namespace mcsvm

#endif  // MCSVM_TRANSPORT_HPP_
