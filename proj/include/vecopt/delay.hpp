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

#ifndef VECOPT_DELAY_HPP
#define VECOPT_DELAY_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "vecopt/topology.hpp"
#include "vecopt/units.hpp"
#include "vecopt/workload.hpp"

namespace vecopt {

// M/M/1 sojourn time 1/(mu - lambda) in seconds per packet. Both rates are in
// packets per second. Throws UnstableQueueError when lambda >= mu.
double mm1_delay(double lambda_pps, double mu_pps);

// Precomputed M/M/1 delays for one service rate over every arrival rate the
// workload can produce. Rows with lambda >= mu hold no value and mark the
// arrival rate as infeasible.
class DelayLookupTable {
 public:
  DelayLookupTable(BitRate service_rate_bps, std::int64_t packet_bits,
                   std::span<const BitRate> arrival_grid_bps);

  BitRate service_rate_bps() const { return service_rate_bps_; }
  double service_rate_pps() const;
  std::int64_t packet_bits() const { return packet_bits_; }
  const std::map<BitRate, std::optional<double>>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  bool contains(BitRate arrival_bps) const { return entries_.contains(arrival_bps); }
  bool feasible(BitRate arrival_bps) const;
  // Seconds per packet. Throws TableGapError for an unknown arrival rate and
  // UnstableQueueError for an infeasible one.
  double delay(BitRate arrival_bps) const;

 private:
  BitRate service_rate_bps_;
  std::int64_t packet_bits_;
  std::map<BitRate, std::optional<double>> entries_;
};

// Every distinct subset sum of the task data rates, ascending, including 0.
std::vector<BitRate> achievable_arrivals(const TaskSet& tasks);

DelayLookupTable build_lookup_table(const TaskSet& tasks, BitRate service_rate_bps,
                                    std::int64_t packet_bits = kEthernetPacketBits);

// One lookup table per distinct service rate of the queuing nodes.
class DelayTables {
 public:
  DelayTables() = default;
  explicit DelayTables(std::map<BitRate, DelayLookupTable> tables)
      : tables_(std::move(tables)) {}

  const DelayLookupTable& for_rate(BitRate service_rate_bps) const;
  const std::map<BitRate, DelayLookupTable>& tables() const { return tables_; }

 private:
  std::map<BitRate, DelayLookupTable> tables_;
};

DelayTables build_lookup_tables(const Topology& topology, const TaskSet& tasks);

// Network devices with an M/M/1 queue: everything except sources and vehicles.
bool has_queue(const Node& node);

// Nodes whose queue a flow on `path` passes through: the path without its
// source and without a destination vehicle.
std::vector<NodeId> charged_nodes(const Topology& topology, const Path& path);

// Propagation delay in seconds over a routed path. The source->AP hop is not
// charged; a fixed processor's fibre offset from its host is.
double propagation_delay(const Topology& topology, const Path& path);

// Arrival rate per node (indexed by NodeId::value), bits/s.
struct NodeLoad {
  std::vector<BitRate> arrival_bps;

  BitRate at(NodeId id) const { return arrival_bps.at(id.value); }
};

// Throws NotAProcessorError / InvalidRangeError on a malformed allocation.
NodeLoad node_arrivals(const Topology& topology, const TaskSet& tasks,
                       const Allocation& allocation);

// Per-node queuing delay Q_i (seconds) at the given loads; zero where idle.
std::vector<double> node_queuing_delays(const Topology& topology, const NodeLoad& load,
                                        const DelayTables& tables);

struct PathDelays {
  std::vector<double> propagation_s;  // R_sd per task
  std::vector<double> queuing_s;      // Q_sd per task
  double total_propagation_s = 0.0;
  double total_queuing_s = 0.0;

  double average_propagation_s() const;
  double average_queuing_s() const;
};

// Propagation and queuing delay of every task under `allocation`.
PathDelays path_delays(const Topology& topology, const TaskSet& tasks,
                       const Allocation& allocation, const DelayTables& tables);

}  // namespace vecopt

#endif  // VECOPT_DELAY_HPP
