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


#pragma once

// Line protocol that lets an external network simulator push packets through
// the link:
//   request   PKT <time_us> <prio> <len> <hex payload>
//   response  RES <time_us> <ok|collision|crc_fail>
//   on error  ERR <message>

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "slsim/config.hpp"
#include "slsim/link.hpp"
#include "slsim/sps.hpp"

namespace slsim::io {

class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TrafficEvent {
  std::int64_t arrival_time_us = 0;
  int priority = 0;
  std::size_t payload_len = 0;  // bytes
  std::vector<std::uint8_t> payload;

  friend bool operator==(const TrafficEvent&, const TrafficEvent&) = default;
};

enum class PacketStatus { ok, collision, crc_fail };

const char* to_string(PacketStatus s);

/// Throws ProtocolError on a malformed request.
TrafficEvent parse_pkt_line(const std::string& line);

std::string emit_outcome(std::int64_t time_us, PacketStatus status);

/// ceil(8 * bytes / tbs_bits).
std::size_t blocks_for_packet(std::size_t payload_bytes, std::size_t tbs_bits);

/// Payload bits split into TBS-sized blocks, the last one zero padded.
std::vector<Bits> segment_packet(const std::vector<std::uint8_t>& payload, std::size_t tbs_bits);

/// Sends every packet as transport blocks over the configured link. Without
/// background vehicles the blocks go out in consecutive subframes; with them
/// the adapter is vehicle 1 of an SPS network and transmits on its grant.
class TrafficAdapter {
 public:
  explicit TrafficAdapter(const ExperimentConfig& cfg);
  ~TrafficAdapter();

  /// One response line (without newline) for one request line.
  std::string handle_line(const std::string& line);

  std::size_t tbs_bits() const { return tbs_; }

 private:
  PacketStatus send(const TrafficEvent& ev);
  link::LinkSimulator& simulator_for(const grid::Allocation& alloc);

  ExperimentConfig cfg_;
  std::size_t tbs_ = 0;
  std::optional<std::int64_t> last_time_us_;
  std::int64_t next_subframe_ = 0;
  Rng rng_;
  std::map<std::size_t, std::unique_ptr<link::LinkSimulator>> sims_;  // by start sub-channel
  std::unique_ptr<mac::Network> network_;
};

/// Serves request lines from `in` until end of stream.
void serve_stream(std::istream& in, std::ostream& out, TrafficAdapter& adapter);

/// Listens on 127.0.0.1:`port`, serves one connection until the peer closes.
/// Port 0 picks a free port; `on_listen` receives the bound port.
void serve_tcp(int port, TrafficAdapter& adapter, const std::function<void(int)>& on_listen = {});

}  // namespace slsim::io
