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

#ifndef MCSVM_WIRE_HPP_
#define MCSVM_WIRE_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mcsvm/dataset.hpp"

namespace mcsvm {

/// Appends little-endian scalars regardless of host byte order.
class ByteWriter {
 public:
  void put_u8(std::uint8_t v) { bytes_.push_back(static_cast<std::byte>(v)); }
  void put_u32(std::uint32_t v);
  void put_u64(std::uint64_t v);
  void put_f64(double v);
  void put_bytes(std::span<const std::byte> b) { bytes_.insert(bytes_.end(), b.begin(), b.end()); }

  const std::vector<std::byte>& bytes() const noexcept { return bytes_; }
  std::vector<std::byte> take() noexcept { return std::move(bytes_); }

 private:
  std::vector<std::byte> bytes_;
};

/// Reads what ByteWriter wrote; throws ProtocolError on a short buffer.
class ByteReader {
 public:
  explicit ByteReader(std::span<const std::byte> bytes) : bytes_(bytes) {}

  std::uint8_t get_u8();
  std::uint32_t get_u32();
  std::uint64_t get_u64();
  double get_f64();
  std::span<const std::byte> get_bytes(std::size_t n);

  bool empty() const noexcept { return pos_ == bytes_.size(); }
  std::size_t remaining() const noexcept { return bytes_.size() - pos_; }

 private:
  std::span<const std::byte> bytes_;
  std::size_t pos_ = 0;
};

enum class MessageTag : std::uint32_t {
  Handshake = 1,
  SparseWeight = 2,
  AllreduceChunk = 3,
  BarrierToken = 4,
  Shutdown = 5,
};

struct Message {
  MessageTag tag = MessageTag::Shutdown;
  std::vector<std::byte> payload;
};

/// Frame layout: [u32 tag][u64 payload_length][payload].
inline constexpr std::size_t kFrameHeaderSize = 12;
std::vector<std::byte> encode_frame(const Message& msg);
/// Parses a 12-byte header; returns (tag, payload length).
std::pair<MessageTag, std::uint64_t> decode_frame_header(std::span<const std::byte, kFrameHeaderSize> header);

inline constexpr std::uint32_t kProtocolVersion = 1;

struct Handshake {
  std::uint32_t protocol_version = kProtocolVersion;
  std::uint64_t dataset_hash = 0;
  std::uint32_t node_id = 0;

  friend bool operator==(const Handshake&, const Handshake&) = default;
};

std::vector<std::byte> encode_handshake(const Handshake& h);
Handshake decode_handshake(std::span<const std::byte> payload);

/// One class weight vector with only its non-zero entries (1-based indices).
struct SparseWeightMessage {
  std::uint32_t class_id = 0;
  std::vector<Feature> entries;

  friend bool operator==(const SparseWeightMessage&, const SparseWeightMessage&) = default;
};

/// Entries whose bit pattern is not +0.0 are kept, so decoding restores the
/// dense vector bit-exactly.
SparseWeightMessage sparsify(std::uint32_t class_id, std::span<const double> dense);
/// Overwrites `dense` (zero-filled first) with the message entries.
void densify(const SparseWeightMessage& msg, std::span<double> dense);

/// class_id u32, nnz u64, then nnz (u32 index, f64 value) pairs.
void encode_sparse_weight(const SparseWeightMessage& msg, ByteWriter& out);
SparseWeightMessage decode_sparse_weight(ByteReader& in);

/// Dual value of one (sample, class) coordinate travelling with a weight
/// exchange, plus its shrinking bookkeeping.
struct AlphaRecord {
  std::uint32_t sample = 0;
  std::uint32_t class_id = 0;
  double alpha = 0.0;
  std::uint8_t stale = 0;
  std::uint8_t active = 0;

  friend bool operator==(const AlphaRecord&, const AlphaRecord&) = default;
};

/// Payload of a SparseWeight frame: u32 count, the weight messages, u64
/// record count, then (u32 sample, u32 class, f64 alpha, u8 stale,
/// u8 active) records.
struct WeightEnvelope {
  std::vector<SparseWeightMessage> weights;
  std::vector<AlphaRecord> alphas;

  friend bool operator==(const WeightEnvelope&, const WeightEnvelope&) = default;
};

std::vector<std::byte> encode_envelope(const WeightEnvelope& env);
WeightEnvelope decode_envelope(std::span<const std::byte> payload);

}  // namespace mcsvm

#endif  // MCSVM_WIRE_HPP_
