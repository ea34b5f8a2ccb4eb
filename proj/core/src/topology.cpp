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

#include "ctf/topology.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <queue>
#include <sstream>

#include "ctf/errors.hpp"

namespace ctf {

namespace {

constexpr const char* kAdjacencyHeader = "# ctf-arena adjacency v1";

std::string host_error(const char* op, HostId h) {
  return std::string(op) + ": unknown host id " + std::to_string(h);
}

}  // namespace

Topology::Topology(int host_count, std::vector<Link> links,
                   std::vector<std::vector<HostId>> subnets, HostId critical_server,
                   std::vector<HostId> entry_points)
    : host_count_(host_count),
      links_(std::move(links)),
      subnets_(std::move(subnets)),
      critical_server_(critical_server),
      entry_points_(std::move(entry_points)),
      incident_(static_cast<std::size_t>(std::max(host_count, 0))) {
  if (host_count_ <= 0) throw DomainError("Topology: host count must be positive");

  std::vector<int> owner(static_cast<std::size_t>(host_count_), -1);
  for (std::size_t s = 0; s < subnets_.size(); ++s) {
    for (HostId h : subnets_[s]) {
      check_host(h, "Topology");
      if (owner[h] != -1) throw DomainError("Topology: host " + std::to_string(h) + " in two subnets");
      owner[h] = static_cast<int>(s);
    }
  }
  if (std::count(owner.begin(), owner.end(), -1) != 0)
    throw DomainError("Topology: subnets do not cover every host");

  check_host(critical_server_, "Topology");
  for (std::size_t i = 0; i < entry_points_.size(); ++i) {
    check_host(entry_points_[i], "Topology");
    if (entry_points_[i] == critical_server_)
      throw DomainError("Topology: critical server cannot be an entry point");
    for (std::size_t j = 0; j < i; ++j)
      if (entry_points_[i] == entry_points_[j]) throw DomainError("Topology: duplicate entry point");
  }

  for (std::size_t id = 0; id < links_.size(); ++id) {
    const Link& l = links_[id];
    check_host(l.a, "Topology");
    check_host(l.b, "Topology");
    if (l.a == l.b) throw DomainError("Topology: self-loop on host " + std::to_string(l.a));
    incident_[l.a].push_back(static_cast<LinkId>(id));
    incident_[l.b].push_back(static_cast<LinkId>(id));
  }
}

Topology Topology::build_default() {
  const std::vector<int> sizes = {6, 8, 9, 9};
  std::vector<std::vector<HostId>> subnets;
  HostId next = 0;
  for (int size : sizes) {
    std::vector<HostId> members(static_cast<std::size_t>(size));
    for (HostId& h : members) h = next++;
    subnets.push_back(std::move(members));
  }

  std::vector<Link> links;
  for (const auto& subnet : subnets)
    for (std::size_t i = 1; i < subnet.size(); ++i) links.push_back({subnet.front(), subnet[i], true});

  const std::size_t n = subnets.size();
  for (std::size_t s = 0; s < n; ++s) links.push_back({subnets[s].front(), subnets[(s + 1) % n].front(), true});

  // Redundancy links: pair (s, s+1 mod 4) in turn, each side taking the next
  // non-gateway host from its own cursor.
  std::vector<std::size_t> cursor(n, 0);
  const int redundancy = kDefaultLinkCount - static_cast<int>(links.size());
  for (int k = 0; k < redundancy; ++k) {
    const std::size_t sa = static_cast<std::size_t>(k) % n;
    const std::size_t sb = (sa + 1) % n;
    auto pick = [&](std::size_t s) {
      const auto& members = subnets[s];
      const HostId h = members[1 + cursor[s] % (members.size() - 1)];
      ++cursor[s];
      return h;
    };
    const HostId a = pick(sa);
    const HostId b = pick(sb);
    links.push_back({a, b, true});
  }

  const HostId critical = subnets[3].back();
  std::vector<HostId> entries = {subnets[0][1], subnets[1][1], subnets[2][1]};
  return Topology(next, std::move(links), std::move(subnets), critical, std::move(entries));
}

void Topology::check_host(HostId h, const char* op) const {
  if (h < 0 || h >= host_count_) throw DomainError(host_error(op, h));
}

const Link& Topology::link(LinkId id) const {
  if (id < 0 || id >= link_count()) throw DomainError("link: unknown link id " + std::to_string(id));
  return links_[static_cast<std::size_t>(id)];
}

const std::vector<LinkId>& Topology::incident_links(HostId h) const {
  check_host(h, "incident_links");
  return incident_[static_cast<std::size_t>(h)];
}

std::vector<HostId> Topology::neighbors(HostId h) const {
  check_host(h, "neighbors");
  std::vector<HostId> out;
  for (LinkId id : incident_[static_cast<std::size_t>(h)]) {
    const Link& l = links_[static_cast<std::size_t>(id)];
    if (l.up) out.push_back(l.a == h ? l.b : l.a);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Topology Topology::with_link(LinkId id, bool up) const {
  if (id < 0 || id >= link_count()) throw DomainError("set_link: unknown link id " + std::to_string(id));
  Topology copy = *this;
  copy.links_[static_cast<std::size_t>(id)].up = up;
  return copy;
}

bool Topology::is_reachable(HostId src, HostId dst) const {
  check_host(src, "is_reachable");
  check_host(dst, "is_reachable");
  if (src == dst) return true;
  std::vector<char> seen(static_cast<std::size_t>(host_count_), 0);
  std::queue<HostId> frontier;
  frontier.push(src);
  seen[src] = 1;
  while (!frontier.empty()) {
    const HostId h = frontier.front();
    frontier.pop();
    for (LinkId id : incident_[static_cast<std::size_t>(h)]) {
      const Link& l = links_[static_cast<std::size_t>(id)];
      if (!l.up) continue;
      const HostId other = l.a == h ? l.b : l.a;
      if (other == dst) return true;
      if (!seen[other]) {
        seen[other] = 1;
        frontier.push(other);
      }
    }
  }
  return false;
}

bool Topology::is_isolated(HostId h) const {
  const auto& ids = incident_links(h);
  return std::none_of(ids.begin(), ids.end(),
                      [&](LinkId id) { return links_[static_cast<std::size_t>(id)].up; });
}

bool Topology::operator==(const Topology& other) const {
  return host_count_ == other.host_count_ && links_ == other.links_ && subnets_ == other.subnets_ &&
         critical_server_ == other.critical_server_ && entry_points_ == other.entry_points_;
}

void write_adjacency(std::ostream& out, const Topology& t) {
  out << kAdjacencyHeader << '\n';
  for (LinkId id = 0; id < t.link_count(); ++id) {
    const Link& l = t.link(id);
    out << id << ' ' << l.a << ' ' << l.b << '\n';
  }
}

std::string adjacency_text(const Topology& t) {
  std::ostringstream out;
  write_adjacency(out, t);
  return out.str();
}

std::vector<Link> read_adjacency(std::istream& in) {
  std::vector<Link> links;
  std::string line;
  std::size_t lineno = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (line == kAdjacencyHeader) saw_header = true;
      continue;
    }
    std::istringstream fields(line);
    long id = 0;
    HostId a = 0, b = 0;
    std::string rest;
    if (!(fields >> id >> a >> b) || (fields >> rest))
      throw ParseError("adjacency", lineno, "expected 'link-id host-a host-b'");
    if (id != static_cast<long>(links.size()))
      throw ParseError("adjacency", lineno, "link ids must be consecutive from 0");
    links.push_back({a, b, true});
  }
  if (!saw_header) throw ParseError("adjacency", 0, "missing version header");
  return links;
}

}  // namespace ctf
