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

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <array>
#include <cerrno>
#include <cstring>
#include <string>
#include <thread>

#include "mcsvm/errors.hpp"
#include "mcsvm/transport.hpp"

namespace mcsvm {

namespace {

using Clock = std::chrono::steady_clock;

std::string sys_error(const std::string& what) { return what + ": " + std::strerror(errno); }

void write_all(int fd, const std::byte* data, std::size_t size, std::uint32_t peer) {
  while (size > 0) {
    const ssize_t k = ::send(fd, data, size, MSG_NOSIGNAL);
    if (k < 0) {
      if (errno == EINTR) continue;
      throw TransportError(sys_error("send to node " + std::to_string(peer) + " failed"));
    }
    data += k;
    size -= static_cast<std::size_t>(k);
  }
}

void read_all(int fd, std::byte* data, std::size_t size, std::uint32_t peer) {
  while (size > 0) {
    const ssize_t k = ::recv(fd, data, size, 0);
    if (k == 0) throw TransportError("node " + std::to_string(peer) + " disconnected");
    if (k < 0) {
      if (errno == EINTR) continue;
      throw TransportError(sys_error("receive from node " + std::to_string(peer) + " failed"));
    }
    data += k;
    size -= static_cast<std::size_t>(k);
  }
}

void write_message(int fd, const Message& msg, std::uint32_t peer) {
  const auto frame = encode_frame(msg);
  write_all(fd, frame.data(), frame.size(), peer);
}

Message read_message(int fd, std::uint32_t peer) {
  std::array<std::byte, kFrameHeaderSize> header{};
  read_all(fd, header.data(), header.size(), peer);
  const auto [tag, len] = decode_frame_header(header);
  if (len > (std::uint64_t{1} << 40)) throw ProtocolError("frame from node " + std::to_string(peer) + " too large");
  Message msg{tag, std::vector<std::byte>(static_cast<std::size_t>(len))};
  read_all(fd, msg.payload.data(), msg.payload.size(), peer);
  return msg;
}

bool wait_readable(int fd, Clock::time_point deadline) {
  for (;;) {
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now()).count();
    if (left <= 0) return false;
    pollfd p{fd, POLLIN, 0};
    const int r = ::poll(&p, 1, static_cast<int>(left));
    if (r > 0) return true;
    if (r < 0 && errno != EINTR) throw TransportError(sys_error("poll failed"));
  }
}

void set_nodelay(int fd) {
  int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
}

int dial(const std::string& endpoint, Clock::time_point deadline) {
  const auto [host, port] = parse_endpoint(endpoint);
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  for (;;) {
    addrinfo* res = nullptr;
    const int rc = ::getaddrinfo(host.c_str(), std::to_string(port).c_str(), &hints, &res);
    if (rc != 0) throw TransportError("cannot resolve " + endpoint + ": " + ::gai_strerror(rc));
    for (addrinfo* ai = res; ai != nullptr; ai = ai->ai_next) {
      const int fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
      if (fd < 0) continue;
      if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) {
        ::freeaddrinfo(res);
        set_nodelay(fd);
        return fd;
      }
      ::close(fd);
    }
    ::freeaddrinfo(res);
    if (Clock::now() >= deadline) throw TransportError("cannot connect to " + endpoint);
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
  }
}

void check_handshake(const Handshake& h, std::uint64_t hash, std::uint32_t from) {
  if (h.protocol_version != kProtocolVersion) {
    throw TransportError("node " + std::to_string(from) + " speaks protocol version " +
                         std::to_string(h.protocol_version) + ", expected " + std::to_string(kProtocolVersion));
  }
  if (h.dataset_hash != hash) throw TransportError("dataset hash mismatch with node " + std::to_string(from));
}

}  // namespace

std::pair<std::string, std::uint16_t> parse_endpoint(const std::string& endpoint) {
  const auto colon = endpoint.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == endpoint.size()) {
    throw InvalidArgument("endpoint must be host:port, got '" + endpoint + "'");
  }
  std::string host = endpoint.substr(0, colon);
  if (host.size() > 2 && host.front() == '[' && host.back() == ']') host = host.substr(1, host.size() - 2);
  unsigned long port = 0;
  try {
    std::size_t used = 0;
    port = std::stoul(endpoint.substr(colon + 1), &used);
    if (used != endpoint.size() - colon - 1) port = 0;
  } catch (const std::exception&) {
    port = 0;
  }
  if (port == 0 || port > 65535) throw InvalidArgument("bad port in endpoint '" + endpoint + "'");
  return {host, static_cast<std::uint16_t>(port)};
}

TcpListener::TcpListener(const std::string& host, std::uint16_t port) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  hints.ai_flags = AI_PASSIVE;
  addrinfo* res = nullptr;
  const int rc = ::getaddrinfo(host.empty() ? nullptr : host.c_str(), std::to_string(port).c_str(), &hints, &res);
  if (rc != 0) throw TransportError("cannot resolve " + host + ": " + ::gai_strerror(rc));
  for (addrinfo* ai = res; ai != nullptr && fd_ < 0; ai = ai->ai_next) {
    const int fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) continue;
    int one = 1;
    ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    if (::bind(fd, ai->ai_addr, ai->ai_addrlen) == 0 && ::listen(fd, 64) == 0) {
      fd_ = fd;
    } else {
      ::close(fd);
    }
  }
  ::freeaddrinfo(res);
  if (fd_ < 0) throw TransportError(sys_error("cannot listen on " + host + ":" + std::to_string(port)));
  sockaddr_storage addr{};
  socklen_t len = sizeof addr;
  ::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = addr.ss_family == AF_INET6 ? ntohs(reinterpret_cast<sockaddr_in6*>(&addr)->sin6_port)
                                     : ntohs(reinterpret_cast<sockaddr_in*>(&addr)->sin_port);
}

TcpListener::~TcpListener() {
  if (fd_ >= 0) ::close(fd_);
}

std::unique_ptr<TcpTransport> TcpTransport::connect(std::uint32_t node_id, const std::vector<std::string>& endpoints,
                                                    std::uint64_t dataset_hash, TcpListener& listener,
                                                    std::chrono::milliseconds timeout) {
  const auto n = static_cast<std::uint32_t>(endpoints.size());
  if (n == 0 || node_id >= n) throw InvalidArgument("node id out of range of the endpoint list");
  const auto deadline = Clock::now() + timeout;
  std::vector<int> fds(n, -1);
  // errors below unwind through the catch blocks, which close every socket
  auto fail = [](const std::string& what) { throw TransportError(what); };
  const Handshake mine{kProtocolVersion, dataset_hash, node_id};
  try {
    for (std::uint32_t peer = 0; peer < node_id; ++peer) {
      fds[peer] = dial(endpoints[peer], deadline);
      write_message(fds[peer], Message{MessageTag::Handshake, encode_handshake(mine)}, peer);
      if (!wait_readable(fds[peer], deadline)) fail("handshake with node " + std::to_string(peer) + " timed out");
      const Message reply = read_message(fds[peer], peer);
      if (reply.tag != MessageTag::Handshake) fail("node " + std::to_string(peer) + " did not answer the handshake");
      const Handshake h = decode_handshake(reply.payload);
      check_handshake(h, dataset_hash, peer);
      if (h.node_id != peer) fail(endpoints[peer] + " claims to be node " + std::to_string(h.node_id));
    }
    for (std::uint32_t accepted = node_id + 1; accepted < n; ++accepted) {
      if (!wait_readable(listener.fd(), deadline)) fail("timed out waiting for peers to connect");
      const int fd = ::accept(listener.fd(), nullptr, nullptr);
      if (fd < 0) fail(sys_error("accept failed"));
      set_nodelay(fd);
      if (!wait_readable(fd, deadline)) {
        ::close(fd);
        fail("handshake from an incoming peer timed out");
      }
      Message hello;
      try {
        hello = read_message(fd, n);
      } catch (...) {
        ::close(fd);
        throw;
      }
      const Handshake h = hello.tag == MessageTag::Handshake ? decode_handshake(hello.payload) : Handshake{0, 0, n};
      if (h.node_id <= node_id || h.node_id >= n || fds[h.node_id] >= 0) {
        ::close(fd);
        fail("unexpected peer announcing node id " + std::to_string(h.node_id));
      }
      fds[h.node_id] = fd;
      check_handshake(h, dataset_hash, h.node_id);
      write_message(fd, Message{MessageTag::Handshake, encode_handshake(mine)}, h.node_id);
    }
  } catch (const TransportError&) {
    for (int& fd : fds) {
      if (fd >= 0) ::close(fd);
      fd = -1;
    }
    throw;
  } catch (const ProtocolError& e) {
    for (int fd : fds) {
      if (fd >= 0) ::close(fd);
    }
    throw TransportError(std::string("handshake failed: ") + e.what());
  }
  return std::unique_ptr<TcpTransport>(new TcpTransport(node_id, std::move(fds)));
}

TcpTransport::~TcpTransport() {
  for (std::uint32_t p = 0; p < fds_.size(); ++p) {
    if (fds_[p] < 0) continue;
    try {
      write_message(fds_[p], Message{MessageTag::Shutdown, {}}, p);
    } catch (const Error&) {
      // peer already gone
    }
    ::close(fds_[p]);
  }
}

int TcpTransport::peer_fd(std::uint32_t peer) const {
  if (peer >= fds_.size() || fds_[peer] < 0) throw InvalidArgument("invalid peer " + std::to_string(peer));
  return fds_[peer];
}

void TcpTransport::send(std::uint32_t peer, Message msg) { write_message(peer_fd(peer), msg, peer); }

Message TcpTransport::receive(std::uint32_t peer) {
  Message msg = read_message(peer_fd(peer), peer);
  if (msg.tag == MessageTag::Shutdown) throw TransportError("node " + std::to_string(peer) + " shut down");
  return msg;
}

}  // namespace mcsvm
