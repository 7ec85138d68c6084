// Copyright 2026 The vecopt Authors
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

#include "vecopt/delay.hpp"

#include <set>
#include <string>

#include "vecopt/error.hpp"

namespace vecopt {

double mm1_delay(double lambda_pps, double mu_pps) {
  if (!(mu_pps > 0.0)) throw UnstableQueueError("service rate must be positive");
  if (!(lambda_pps < mu_pps)) {
    throw UnstableQueueError("arrival rate " + std::to_string(lambda_pps) +
                             " pkt/s saturates service rate " +
                             std::to_string(mu_pps) + " pkt/s");
  }
  return 1.0 / (mu_pps - lambda_pps);
}

DelayLookupTable::DelayLookupTable(BitRate service_rate_bps, std::int64_t packet_bits,
                                   std::span<const BitRate> arrival_grid_bps)
    : service_rate_bps_(service_rate_bps), packet_bits_(packet_bits) {
  if (service_rate_bps <= 0) throw InvalidRangeError("service rate must be positive");
  if (packet_bits <= 0) throw InvalidRangeError("packet size must be positive");
  const double mu = service_rate_pps();
  for (BitRate lambda : arrival_grid_bps) {
    if (lambda < 0) throw InvalidRangeError("negative arrival rate in grid");
    const double lambda_pps =
        static_cast<double>(lambda) / static_cast<double>(packet_bits_);
    if (lambda_pps < mu) {
      entries_[lambda] = mm1_delay(lambda_pps, mu);
    } else {
      entries_[lambda] = std::nullopt;
    }
  }
}

double DelayLookupTable::service_rate_pps() const {
  return static_cast<double>(service_rate_bps_) / static_cast<double>(packet_bits_);
}

bool DelayLookupTable::feasible(BitRate arrival_bps) const {
  auto it = entries_.find(arrival_bps);
  return it != entries_.end() && it->second.has_value();
}

double DelayLookupTable::delay(BitRate arrival_bps) const {
  auto it = entries_.find(arrival_bps);
  if (it == entries_.end()) {
    throw TableGapError("no lookup row for arrival rate " + std::to_string(arrival_bps) +
                        " b/s at service rate " + std::to_string(service_rate_bps_) +
                        " b/s");
  }
  if (!it->second) {
    throw UnstableQueueError("arrival rate " + std::to_string(arrival_bps) +
                             " b/s is not below service rate " +
                             std::to_string(service_rate_bps_) + " b/s");
  }
  return *it->second;
}

std::vector<BitRate> achievable_arrivals(const TaskSet& tasks) {
  std::set<BitRate> sums{0};
  for (const Task& t : tasks.tasks()) {
    std::vector<BitRate> grown;
    grown.reserve(sums.size());
    for (BitRate s : sums) grown.push_back(s + t.data_rate_bps);
    sums.insert(grown.begin(), grown.end());
  }
  return {sums.begin(), sums.end()};
}

DelayLookupTable build_lookup_table(const TaskSet& tasks, BitRate service_rate_bps,
                                    std::int64_t packet_bits) {
  const std::vector<BitRate> grid = achievable_arrivals(tasks);
  return DelayLookupTable(service_rate_bps, packet_bits, grid);
}

const DelayLookupTable& DelayTables::for_rate(BitRate service_rate_bps) const {
  auto it = tables_.find(service_rate_bps);
  if (it == tables_.end()) {
    throw TableGapError("no lookup table for service rate " +
                        std::to_string(service_rate_bps) + " b/s");
  }
  return it->second;
}

DelayTables build_lookup_tables(const Topology& topology, const TaskSet& tasks) {
  const std::vector<BitRate> grid = achievable_arrivals(tasks);
  std::map<BitRate, DelayLookupTable> tables;
  for (const Node& node : topology.nodes()) {
    if (!has_queue(node) || tables.contains(node.service_rate_bps)) continue;
    tables.emplace(node.service_rate_bps,
                   DelayLookupTable(node.service_rate_bps, topology.packet_bits(), grid));
  }
  return DelayTables(std::move(tables));
}

bool has_queue(const Node& node) {
  return node.kind != NodeKind::kSourceNode && node.kind != NodeKind::kVehicularNode;
}

std::vector<NodeId> charged_nodes(const Topology& topology, const Path& path) {
  std::vector<NodeId> out;
  for (std::size_t i = 1; i < path.size(); ++i) {
    if (has_queue(topology.node(path[i]))) out.push_back(path[i]);
  }
  return out;
}

double propagation_delay(const Topology& topology, const Path& path) {
  constexpr double kFibreSpeed = kFibreVelocityRatio * kSpeedOfLight;
  double seconds = 0.0;
  for (std::size_t i = 2; i < path.size(); ++i) {
    const Link* link = topology.link_between(path[i - 1], path[i]);
    if (!link) {
      throw UnknownNodeError("path hop " + std::to_string(path[i - 1].value) + "->" +
                             std::to_string(path[i].value) + " is not a link");
    }
    seconds += link->medium == Medium::kFibre ? link->distance_m / kFibreSpeed
                                              : link->distance_m / kSpeedOfLight;
  }
  if (!path.empty()) {
    const Node& dest = topology.node(path.back());
    if (dest.processor && dest.processor->tier != PnTier::kVn) {
      seconds += dest.processor->offset_m / kFibreSpeed;
    }
  }
  return seconds;
}

namespace {

void check_allocation(const Topology& topology, const TaskSet& tasks,
                      const Allocation& allocation) {
  if (allocation.size() != tasks.size()) {
    throw InvalidRangeError("allocation covers " + std::to_string(allocation.size()) +
                            " tasks, expected " + std::to_string(tasks.size()));
  }
  for (NodeId pn : allocation) {
    if (!topology.is_processing_node(pn)) {
      throw NotAProcessorError("allocation target " + std::to_string(pn.value) +
                               " hosts no processor");
    }
  }
}

}  // namespace

NodeLoad node_arrivals(const Topology& topology, const TaskSet& tasks,
                       const Allocation& allocation) {
  check_allocation(topology, tasks, allocation);
  NodeLoad load{std::vector<BitRate>(topology.nodes().size(), 0)};
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    const Path path = route(topology, tasks[t].source, allocation[t]);
    for (NodeId n : charged_nodes(topology, path)) {
      load.arrival_bps[n.value] += tasks[t].data_rate_bps;
    }
  }
  return load;
}

std::vector<double> node_queuing_delays(const Topology& topology, const NodeLoad& load,
                                        const DelayTables& tables) {
  std::vector<double> q(topology.nodes().size(), 0.0);
  for (const Node& node : topology.nodes()) {
    const BitRate lambda = load.at(node.id);
    if (lambda == 0 || !has_queue(node)) continue;
    q[node.id.value] = tables.for_rate(node.service_rate_bps).delay(lambda);
  }
  return q;
}

double PathDelays::average_propagation_s() const {
  return propagation_s.empty() ? 0.0
                               : total_propagation_s / static_cast<double>(propagation_s.size());
}

double PathDelays::average_queuing_s() const {
  return queuing_s.empty() ? 0.0
                           : total_queuing_s / static_cast<double>(queuing_s.size());
}

PathDelays path_delays(const Topology& topology, const TaskSet& tasks,
                       const Allocation& allocation, const DelayTables& tables) {
  const NodeLoad load = node_arrivals(topology, tasks, allocation);
  const std::vector<double> q = node_queuing_delays(topology, load, tables);
  PathDelays out;
  out.propagation_s.reserve(tasks.size());
  out.queuing_s.reserve(tasks.size());
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    const Path path = route(topology, tasks[t].source, allocation[t]);
    const double r = propagation_delay(topology, path);
    double qsd = 0.0;
    for (NodeId n : charged_nodes(topology, path)) qsd += q[n.value];
    out.propagation_s.push_back(r);
    out.queuing_s.push_back(qsd);
    out.total_propagation_s += r;
    out.total_queuing_s += qsd;
  }
  return out;
}

}  // namespace vecopt
