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

#include "mcsvm/wire.hpp"

#include <bit>
#include <string>

#include "mcsvm/errors.hpp"

namespace mcsvm {

void ByteWriter::put_u32(std::uint32_t v) {
  for (int b = 0; b < 4; ++b) bytes_.push_back(static_cast<std::byte>((v >> (8 * b)) & 0xffU));
}

void ByteWriter::put_u64(std::uint64_t v) {
  for (int b = 0; b < 8; ++b) bytes_.push_back(static_cast<std::byte>((v >> (8 * b)) & 0xffU));
}

void ByteWriter::put_f64(double v) { put_u64(std::bit_cast<std::uint64_t>(v)); }

std::span<const std::byte> ByteReader::get_bytes(std::size_t n) {
  if (n > remaining()) {
    throw ProtocolError("short buffer: need " + std::to_string(n) + " bytes, have " +
                        std::to_string(remaining()));
  }
  auto out = bytes_.subspan(pos_, n);
  pos_ += n;
  return out;
}

std::uint8_t ByteReader::get_u8() { return static_cast<std::uint8_t>(get_bytes(1)[0]); }

std::uint32_t ByteReader::get_u32() {
  auto b = get_bytes(4);
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<std::uint32_t>(b[static_cast<std::size_t>(i)]);
  return v;
}

std::uint64_t ByteReader::get_u64() {
  auto b = get_bytes(8);
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | static_cast<std::uint64_t>(b[static_cast<std::size_t>(i)]);
  return v;
}

double ByteReader::get_f64() { return std::bit_cast<double>(get_u64()); }

std::vector<std::byte> encode_frame(const Message& msg) {
  ByteWriter w;
  w.put_u32(static_cast<std::uint32_t>(msg.tag));
  w.put_u64(msg.payload.size());
  w.put_bytes(msg.payload);
  return w.take();
}

std::pair<MessageTag, std::uint64_t> decode_frame_header(std::span<const std::byte, kFrameHeaderSize> header) {
  ByteReader r(header);
  const std::uint32_t tag = r.get_u32();
  if (tag < 1 || tag > 5) throw ProtocolError("unknown message tag " + std::to_string(tag));
  return {static_cast<MessageTag>(tag), r.get_u64()};
}

std::vector<std::byte> encode_handshake(const Handshake& h) {
  ByteWriter w;
  w.put_u32(h.protocol_version);
  w.put_u64(h.dataset_hash);
  w.put_u32(h.node_id);
  return w.take();
}

Handshake decode_handshake(std::span<const std::byte> payload) {
  ByteReader r(payload);
  Handshake h;
  h.protocol_version = r.get_u32();
  h.dataset_hash = r.get_u64();
  h.node_id = r.get_u32();
  if (!r.empty()) throw ProtocolError("trailing bytes in handshake");
  return h;
}

SparseWeightMessage sparsify(std::uint32_t class_id, std::span<const double> dense) {
  SparseWeightMessage msg{class_id, {}};
  for (std::size_t j = 0; j < dense.size(); ++j) {
    if (std::bit_cast<std::uint64_t>(dense[j]) != 0) {
      msg.entries.push_back({static_cast<std::uint32_t>(j + 1), dense[j]});
    }
  }
  return msg;
}

void densify(const SparseWeightMessage& msg, std::span<double> dense) {
  std::fill(dense.begin(), dense.end(), 0.0);
  for (const Feature& f : msg.entries) {
    if (f.index == 0 || f.index > dense.size()) {
      throw ProtocolError("weight index " + std::to_string(f.index) + " out of range");
    }
    dense[f.index - 1] = f.value;
  }
}

void encode_sparse_weight(const SparseWeightMessage& msg, ByteWriter& out) {
  out.put_u32(msg.class_id);
  out.put_u64(msg.entries.size());
  for (const Feature& f : msg.entries) {
    out.put_u32(f.index);
    out.put_f64(f.value);
  }
}

SparseWeightMessage decode_sparse_weight(ByteReader& in) {
  SparseWeightMessage msg;
  msg.class_id = in.get_u32();
  const std::uint64_t nnz = in.get_u64();
  if (nnz > in.remaining() / 12) throw ProtocolError("sparse weight nnz exceeds payload");
  msg.entries.reserve(nnz);
  std::uint32_t prev = 0;
  for (std::uint64_t k = 0; k < nnz; ++k) {
    const std::uint32_t idx = in.get_u32();
    const double v = in.get_f64();
    if (idx <= prev) throw ProtocolError("sparse weight indices not strictly increasing");
    prev = idx;
    msg.entries.push_back({idx, v});
  }
  return msg;
}

std::vector<std::byte> encode_envelope(const WeightEnvelope& env) {
  ByteWriter w;
  w.put_u32(static_cast<std::uint32_t>(env.weights.size()));
  for (const auto& m : env.weights) encode_sparse_weight(m, w);
  w.put_u64(env.alphas.size());
  for (const AlphaRecord& r : env.alphas) {
    w.put_u32(r.sample);
    w.put_u32(r.class_id);
    w.put_f64(r.alpha);
    w.put_u8(r.stale);
    w.put_u8(r.active);
  }
  return w.take();
}

WeightEnvelope decode_envelope(std::span<const std::byte> payload) {
  ByteReader in(payload);
  WeightEnvelope env;
  const std::uint32_t count = in.get_u32();
  for (std::uint32_t k = 0; k < count; ++k) env.weights.push_back(decode_sparse_weight(in));
  const std::uint64_t records = in.get_u64();
  if (records > in.remaining() / 18) throw ProtocolError("alpha record count exceeds payload");
  env.alphas.resize(records);
  for (AlphaRecord& r : env.alphas) {
    r.sample = in.get_u32();
    r.class_id = in.get_u32();
    r.alpha = in.get_f64();
    r.stale = in.get_u8();
    r.active = in.get_u8();
  }
  if (!in.empty()) throw ProtocolError("trailing bytes after weight envelope");
  return env;
}

}  // namespace mcsvm
