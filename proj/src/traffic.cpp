/*
 * Copyright 2026 The slsim Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#include "slsim/traffic.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cstring>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>

#include "slsim/error.hpp"
#include "slsim/phy_tx.hpp"

namespace slsim::io {

const char* to_string(PacketStatus s) {
  switch (s) {
    case PacketStatus::ok:
      return "ok";
    case PacketStatus::collision:
      return "collision";
    case PacketStatus::crc_fail:
      return "crc_fail";
  }
  return "?";
}

namespace {

template <typename T>
T parse_number(const std::string& tok, const char* what) {
  T v{};
  const auto r = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (tok.empty() || r.ec != std::errc{} || r.ptr != tok.data() + tok.size())
    throw ProtocolError(std::string("bad ") + what + " '" + tok + "'");
  return v;
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

TrafficEvent parse_pkt_line(const std::string& line) {
  std::istringstream in(line);
  std::string tag, t, prio, len, hex, extra;
  in >> tag >> t >> prio >> len >> hex;
  if (tag != "PKT") throw ProtocolError("expected PKT request");
  if (hex.empty()) throw ProtocolError("expected PKT <time_us> <prio> <len> <hex>");
  if (in >> extra) throw ProtocolError("trailing fields");
  TrafficEvent ev;
  ev.arrival_time_us = parse_number<std::int64_t>(t, "time");
  if (ev.arrival_time_us < 0) throw ProtocolError("negative time");
  ev.priority = parse_number<int>(prio, "priority");
  if (ev.priority < 0 || ev.priority > 7) throw ProtocolError("priority outside 0..7");
  ev.payload_len = parse_number<std::size_t>(len, "length");
  if (ev.payload_len == 0) throw ProtocolError("empty payload");
  if (hex.size() != 2 * ev.payload_len)
    throw ProtocolError("payload has " + std::to_string(hex.size() / 2) + " bytes, header says " +
                        std::to_string(ev.payload_len));
  for (std::size_t i = 0; i < ev.payload_len; ++i) {
    const int hi = hex_value(hex[2 * i]), lo = hex_value(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) throw ProtocolError("payload is not hex");
    ev.payload.push_back(static_cast<std::uint8_t>(hi * 16 + lo));
  }
  return ev;
}

std::string emit_outcome(std::int64_t time_us, PacketStatus status) {
  return "RES " + std::to_string(time_us) + " " + to_string(status);
}

std::size_t blocks_for_packet(std::size_t payload_bytes, std::size_t tbs_bits) {
  if (tbs_bits == 0) throw ContractError("blocks_for_packet: zero TBS");
  return (8 * payload_bytes + tbs_bits - 1) / tbs_bits;
}

std::vector<Bits> segment_packet(const std::vector<std::uint8_t>& payload, std::size_t tbs_bits) {
  const std::size_t n = blocks_for_packet(payload.size(), tbs_bits);
  std::vector<Bits> blocks(n, Bits(tbs_bits, 0));
  for (std::size_t i = 0; i < 8 * payload.size(); ++i)
    blocks[i / tbs_bits][i % tbs_bits] = static_cast<std::uint8_t>((payload[i / 8] >> (7 - i % 8)) & 1u);
  return blocks;
}

TrafficAdapter::TrafficAdapter(const ExperimentConfig& cfg)
    : cfg_(cfg), rng_(derive_seed(cfg.master_seed, {0x7a}))  {
  cfg_.validate();
  tbs_ = phy::transport_block_bits(cfg_.link.grid, cfg_.link.alloc, cfg_.traffic_mcs);
  if (cfg_.traffic_background_vehicles > 0) {
    mac::NetworkConfig net;
    net.pool = cfg_.pool;
    net.pool.n_subchannels = cfg_.link.grid.n_subchannels;
    net.grant_width = cfg_.link.alloc.n_subchannels;
    net.mcs = cfg_.traffic_mcs;
    net.link_snr_db = cfg_.link.calibration.snr_db(cfg_.traffic_tx_power_dbm);
    auto vehicles = mac::make_vehicles(net, cfg_.traffic_policy, 1 + cfg_.traffic_background_vehicles,
                                       cfg_.master_seed);
    vehicles[0].has_traffic = false;
    network_ = std::make_unique<mac::Network>(net, std::move(vehicles), cfg_.master_seed);
  }
}

TrafficAdapter::~TrafficAdapter() = default;

link::LinkSimulator& TrafficAdapter::simulator_for(const grid::Allocation& alloc) {
  auto& sim = sims_[alloc.start_subchannel];
  if (!sim) {
    auto lc = cfg_.link;
    lc.alloc = alloc;
    sim = std::make_unique<link::LinkSimulator>(lc, derive_seed(cfg_.master_seed, {0x7b}));
  }
  return *sim;
}

PacketStatus TrafficAdapter::send(const TrafficEvent& ev) {
  const auto blocks = segment_packet(ev.payload, tbs_);
  std::int64_t sf = std::max(next_subframe_, ev.arrival_time_us / 1000);
  bool collided = false, failed = false;

  if (!network_) {
    for (const auto& b : blocks) {
      const auto o = simulator_for(cfg_.link.alloc).run_subframe(b, cfg_.traffic_mcs, cfg_.traffic_tx_power_dbm, sf++, rng_);
      failed = failed || !o.success();
    }
    next_subframe_ = sf;
    return failed ? PacketStatus::crc_fail : PacketStatus::ok;
  }

  // background vehicles keep running while the adapter has nothing queued
  for (; next_subframe_ < sf; ++next_subframe_) network_->step(next_subframe_);
  auto& me = network_->vehicle(0);
  me.has_traffic = true;
  std::size_t sent = 0;
  while (sent < blocks.size()) {
    const grid::Allocation alloc = me.grant.allocation();
    const auto log = network_->step(next_subframe_);
    for (const auto& rec : log) {
      if (rec.vehicle_id != me.id) continue;
      collided = collided || rec.collided;
      const auto o = simulator_for(alloc).run_subframe(blocks[sent], cfg_.traffic_mcs, cfg_.traffic_tx_power_dbm,
                                                       next_subframe_, rng_);
      failed = failed || !o.success();
      ++sent;
    }
    ++next_subframe_;
  }
  me.has_traffic = false;
  if (collided) return PacketStatus::collision;
  return failed ? PacketStatus::crc_fail : PacketStatus::ok;
}

std::string TrafficAdapter::handle_line(const std::string& line) {
  try {
    const TrafficEvent ev = parse_pkt_line(line);
    if (last_time_us_ && ev.arrival_time_us < *last_time_us_)
      throw ProtocolError("timestamp " + std::to_string(ev.arrival_time_us) + " is before " +
                          std::to_string(*last_time_us_));
    last_time_us_ = ev.arrival_time_us;
    return emit_outcome(ev.arrival_time_us, send(ev));
  } catch (const ProtocolError& e) {
    return std::string("ERR ") + e.what();
  }
}

void serve_stream(std::istream& in, std::ostream& out, TrafficAdapter& adapter) {
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    out << adapter.handle_line(line) << '\n' << std::flush;
  }
}

namespace {

struct Fd {
  int fd = -1;
  ~Fd() {
    if (fd >= 0) ::close(fd);
  }
};

[[noreturn]] void sys_fail(const char* what) { throw std::runtime_error(std::string(what) + ": " + std::strerror(errno)); }

}  // namespace

void serve_tcp(int port, TrafficAdapter& adapter, const std::function<void(int)>& on_listen) {
  if (port < 0 || port > 65535) throw ConfigError("port out of range", "--traffic");
  Fd listener{::socket(AF_INET, SOCK_STREAM, 0)};
  if (listener.fd < 0) sys_fail("socket");
  const int one = 1;
  ::setsockopt(listener.fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = htons(static_cast<std::uint16_t>(port));
  if (::bind(listener.fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0) sys_fail("bind");
  if (::listen(listener.fd, 1) < 0) sys_fail("listen");
  socklen_t len = sizeof addr;
  if (::getsockname(listener.fd, reinterpret_cast<sockaddr*>(&addr), &len) < 0) sys_fail("getsockname");
  if (on_listen) on_listen(ntohs(addr.sin_port));

  Fd conn{::accept(listener.fd, nullptr, nullptr)};
  if (conn.fd < 0) sys_fail("accept");
  std::string buffer;
  char chunk[4096];
  for (;;) {
    const ssize_t n = ::recv(conn.fd, chunk, sizeof chunk, 0);
    if (n < 0) {
      if (errno == EINTR) continue;
      sys_fail("recv");
    }
    if (n == 0) break;
    buffer.append(chunk, static_cast<std::size_t>(n));
    std::size_t pos;
    while ((pos = buffer.find('\n')) != std::string::npos) {
      std::string line = buffer.substr(0, pos);
      buffer.erase(0, pos + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      const std::string reply = adapter.handle_line(line) + "\n";
      for (std::size_t off = 0; off < reply.size();) {
        const ssize_t w = ::send(conn.fd, reply.data() + off, reply.size() - off, MSG_NOSIGNAL);
        if (w < 0) {
          if (errno == EINTR) continue;
          sys_fail("send");
        }
        off += static_cast<std::size_t>(w);
      }
    }
  }
}

}  // namespace slsim::io
