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

#ifndef VECOPT_TESTS_TEST_SUPPORT_HPP
#define VECOPT_TESTS_TEST_SUPPORT_HPP

#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include <vecopt/optimizer.hpp>
#include <vecopt/power.hpp>
#include <vecopt/topology.hpp>
#include <vecopt/workload.hpp>

namespace vecopt::testing {

inline constexpr double kDrr = 0.1;

inline NodeId node(const Topology& topology, std::string_view name) {
  return topology.find(name).value();
}

inline NodeId pn(const Topology& topology, PnTier tier) {
  return topology.processing_node(tier).value();
}

// n identical tasks of `demand_mips`, one per source node (round robin).
inline TaskSet uniform_tasks(const Topology& topology, double demand_mips, std::size_t n = 10) {
  const std::vector<double> demands(n, demand_mips);
  return make_task_set(demands, kDrr, topology.source_nodes());
}

// Ten identical tasks carrying `total_mbps` in total, as in the default sweep.
inline TaskSet sweep_point(const Topology& topology, double total_mbps) {
  return uniform_tasks(topology, total_mbps / (10.0 * kDrr), 10);
}

inline Allocation all_on(const TaskSet& tasks, NodeId target) {
  return Allocation(tasks.size(), target);
}

inline std::vector<std::string> names(const Topology& topology, const Allocation& allocation) {
  std::vector<std::string> out;
  for (NodeId id : allocation) out.push_back(topology.node(id).name);
  return out;
}

inline bool relative_equal(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

// Same parameters as the shipped file with a different NF capacity.
inline PowerParams params_with_nf_capacity(double mips) {
  PowerParams p = PowerParams::defaults();
  p.processors.at(PnTier::kNf).capacity_mips = mips;
  return p;
}

// Counts tasks per tier in `allocation`.
inline std::size_t tasks_on(const Topology& topology, const Allocation& allocation,
                            PnTier tier) {
  std::size_t n = 0;
  for (NodeId id : allocation) {
    const auto& proc = topology.node(id).processor;
    if (proc && proc->tier == tier) ++n;
  }
  return n;
}

}  // namespace vecopt::testing

#endif  // VECOPT_TESTS_TEST_SUPPORT_HPP
