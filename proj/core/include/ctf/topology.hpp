// Copyright 2026 The ctf-arena Authors
//
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

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ctf {

using HostId = int;
using LinkId = int;

inline constexpr int kDefaultHostCount = 32;
inline constexpr int kDefaultLinkCount = 48;
inline constexpr int kDefaultSubnetCount = 4;

struct Link {
  HostId a = 0;
  HostId b = 0;
  bool up = true;

  bool operator==(const Link&) const = default;
};

// Host/link graph of the simulated network. Values are immutable in spirit:
// with_link() returns a modified copy, so a Topology can be shared read-only
// across concurrently running games.
class Topology {
 public:
  // Validates the structural invariants that hold for any topology: subnets
  // partition the hosts, entry points are distinct and exclude the critical
  // server, link endpoints are valid and distinct. Throws DomainError.
  Topology(int host_count, std::vector<Link> links, std::vector<std::vector<HostId>> subnets,
           HostId critical_server, std::vector<HostId> entry_points);

  // The canonical 32-host, 48-link, four-subnet network:
  //   - each subnet is a star around its first host (the gateway),
  //   - the four gateways form a ring,
  //   - 16 cross-subnet redundancy links are dealt round-robin over the
  //     non-gateway hosts of adjacent subnet pairs.
  // Entry points are the second host of subnets 1-3; the critical server is
  // the last host of subnet 4.
  static Topology build_default();

  int host_count() const { return host_count_; }
  int link_count() const { return static_cast<int>(links_.size()); }
  const std::vector<Link>& links() const { return links_; }
  const Link& link(LinkId id) const;
  const std::vector<std::vector<HostId>>& subnets() const { return subnets_; }
  HostId critical_server() const { return critical_server_; }
  const std::vector<HostId>& entry_points() const { return entry_points_; }

  // Ids of every wired link touching h, regardless of status, ascending.
  const std::vector<LinkId>& incident_links(HostId h) const;

  // Hosts sharing an up link with h, ascending.
  std::vector<HostId> neighbors(HostId h) const;

  [[nodiscard]] Topology with_link(LinkId id, bool up) const;

  bool is_reachable(HostId src, HostId dst) const;

  // True when every link incident to h is down.
  bool is_isolated(HostId h) const;

  bool operator==(const Topology& other) const;

 private:
  void check_host(HostId h, const char* op) const;

  int host_count_;
  std::vector<Link> links_;
  std::vector<std::vector<HostId>> subnets_;
  HostId critical_server_;
  std::vector<HostId> entry_points_;
  std::vector<std::vector<LinkId>> incident_;
};

// Plain-text adjacency dump: a "# ctf-arena adjacency v1" line, then one
// "link-id host-a host-b" line per link in id order.
void write_adjacency(std::ostream& out, const Topology& t);
std::string adjacency_text(const Topology& t);

// Reads the wiring back. Every link is returned up; statuses are not part of
// the format.
std::vector<Link> read_adjacency(std::istream& in);

}  // namespace ctf
