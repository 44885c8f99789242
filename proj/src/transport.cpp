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

#include "mcsvm/transport.hpp"

#include <algorithm>
#include <string>

#include "mcsvm/errors.hpp"

namespace mcsvm {

Message Transport::expect(std::uint32_t peer, MessageTag tag) {
  Message msg = receive(peer);
  if (msg.tag != tag) {
    throw ProtocolError("node " + std::to_string(node_id()) + ": expected message tag " +
                        std::to_string(static_cast<std::uint32_t>(tag)) + " from node " + std::to_string(peer) +
                        ", got " + std::to_string(static_cast<std::uint32_t>(msg.tag)));
  }
  return msg;
}

void Transport::barrier() {
  const std::uint32_t n = num_nodes();
  if (n == 1) return;
  if (node_id() == 0) {
    for (std::uint32_t p = 1; p < n; ++p) expect(p, MessageTag::BarrierToken);
    for (std::uint32_t p = 1; p < n; ++p) send(p, Message{MessageTag::BarrierToken, {}});
  } else {
    send(0, Message{MessageTag::BarrierToken, {}});
    expect(0, MessageTag::BarrierToken);
  }
}

namespace {

void send_chunks(Transport& t, std::uint32_t peer, std::span<const double> data) {
  std::size_t offset = 0;
  do {
    const std::size_t count = std::min(Transport::kChunkDoubles, data.size() - offset);
    ByteWriter w;
    w.put_u64(offset);
    w.put_u64(count);
    for (std::size_t k = 0; k < count; ++k) w.put_f64(data[offset + k]);
    t.send(peer, Message{MessageTag::AllreduceChunk, w.take()});
    offset += count;
  } while (offset < data.size());
}

template <class Apply>
void receive_chunks(Transport& t, std::uint32_t peer, std::size_t size, Apply&& apply) {
  std::size_t offset = 0;
  do {
    const Message msg = t.expect(peer, MessageTag::AllreduceChunk);
    ByteReader r(msg.payload);
    const std::uint64_t at = r.get_u64();
    const std::uint64_t count = r.get_u64();
    if (at != offset || count > size - offset || r.remaining() != count * 8 || (count == 0 && size != 0)) {
      throw ProtocolError("allreduce chunk out of sequence from node " + std::to_string(peer));
    }
    for (std::uint64_t k = 0; k < count; ++k) apply(offset + k, r.get_f64());
    offset += count;
  } while (offset < size);
}

}  // namespace

void Transport::allreduce_sum(std::span<double> data) {
  const std::uint32_t n = num_nodes();
  if (n == 1) return;
  if (node_id() == 0) {
    for (std::uint32_t p = 1; p < n; ++p) {
      receive_chunks(*this, p, data.size(), [&](std::size_t j, double v) { data[j] += v; });
    }
    for (std::uint32_t p = 1; p < n; ++p) send_chunks(*this, p, data);
  } else {
    send_chunks(*this, 0, data);
    receive_chunks(*this, 0, data.size(), [&](std::size_t j, double v) { data[j] = v; });
  }
}

void verify_dataset(Transport& transport, std::uint64_t dataset_hash) {
  const std::uint32_t n = transport.num_nodes();
  if (n == 1) return;
  if (transport.node_id() == 0) {
    std::uint32_t bad = 0;
    for (std::uint32_t p = 1; p < n; ++p) {
      const Handshake h = decode_handshake(transport.expect(p, MessageTag::Handshake).payload);
      if (h.dataset_hash != dataset_hash || h.protocol_version != kProtocolVersion) bad = bad ? bad : p;
    }
    for (std::uint32_t p = 1; p < n; ++p) {
      ByteWriter w;
      w.put_u32(bad);
      transport.send(p, Message{MessageTag::BarrierToken, w.take()});
    }
    if (bad) throw TransportError("dataset hash mismatch between node 0 and node " + std::to_string(bad));
  } else {
    transport.send(0, Message{MessageTag::Handshake,
                              encode_handshake(Handshake{kProtocolVersion, dataset_hash, transport.node_id()})});
    const Message verdict = transport.expect(0, MessageTag::BarrierToken);
    ByteReader r(verdict.payload);
    const std::uint32_t bad = r.get_u32();
    if (bad) throw TransportError("dataset hash mismatch between node 0 and node " + std::to_string(bad));
  }
}

class InProcTransport final : public Transport {
 public:
  InProcTransport(InProcHub& hub, std::uint32_t id) : hub_(&hub), id_(id) {}
  ~InProcTransport() override {
    for (std::uint32_t p = 0; p < hub_->num_nodes(); ++p) {
      if (p != id_) push(p, Message{MessageTag::Shutdown, {}});
    }
  }

  std::uint32_t node_id() const override { return id_; }
  std::uint32_t num_nodes() const override { return hub_->num_nodes(); }

  void send(std::uint32_t peer, Message msg) override {
    check_peer(peer);
    push(peer, std::move(msg));
  }

  Message receive(std::uint32_t peer) override {
    check_peer(peer);
    auto& q = hub_->queue(peer, id_);
    std::unique_lock lock(q.mu);
    q.cv.wait(lock, [&] { return !q.items.empty(); });
    Message msg = std::move(q.items.front());
    q.items.pop_front();
    if (msg.tag == MessageTag::Shutdown) {
      q.items.push_front(msg);  // stays closed
      throw TransportError("node " + std::to_string(peer) + " shut down");
    }
    return msg;
  }

 private:
  void check_peer(std::uint32_t peer) const {
    if (peer >= hub_->num_nodes() || peer == id_) throw InvalidArgument("invalid peer " + std::to_string(peer));
  }
  void push(std::uint32_t peer, Message msg) {
    auto& q = hub_->queue(id_, peer);
    {
      std::lock_guard lock(q.mu);
      q.items.push_back(std::move(msg));
    }
    q.cv.notify_all();
  }

  InProcHub* hub_;
  std::uint32_t id_;
};

InProcHub::InProcHub(std::uint32_t num_nodes) : num_nodes_(num_nodes) {
  if (num_nodes == 0) throw InvalidArgument("need at least one node");
  queues_.resize(static_cast<std::size_t>(num_nodes) * num_nodes);
  for (auto& q : queues_) q = std::make_unique<Queue>();
}

InProcHub::~InProcHub() = default;

std::unique_ptr<Transport> InProcHub::connect(std::uint32_t node_id) {
  if (node_id >= num_nodes_) throw InvalidArgument("node id out of range");
  return std::make_unique<InProcTransport>(*this, node_id);
}

}  // namespace mcsvm
