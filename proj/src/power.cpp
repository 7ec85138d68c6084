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

#include "vecopt/power.hpp"

#include <cmath>
#include <string>

#include "vecopt/config.hpp"
#include "vecopt/delay.hpp"
#include "vecopt/error.hpp"

namespace vecopt {

const ProcessorSpec& PowerParams::processor(PnTier tier) const {
  auto it = processors.find(tier);
  if (it == processors.end()) {
    throw ConfigError("no power parameters for tier " + std::string(to_string(tier)));
  }
  return it->second;
}

const NetDeviceSpec& PowerParams::device(NodeKind kind) const {
  auto it = devices.find(kind);
  if (it == devices.end()) {
    throw ConfigError("no power parameters for device kind " +
                      std::string(to_string(kind)));
  }
  return it->second;
}

void PowerParams::validate() const {
  for (const auto& [tier, p] : processors) {
    const std::string name(to_string(tier));
    if (!(p.capacity_mips > 0.0)) throw ConfigError(name + ": capacity must be positive");
    if (!(p.pue >= 1.0)) throw ConfigError(name + ": PUE must be at least 1");
    if (p.idle_w < 0.0 || p.w_per_mips < 0.0 || p.adapter_w < 0.0 ||
        p.ingress_cap_bps < 0) {
      throw ConfigError(name + ": power coefficients must be non-negative");
    }
  }
  for (const auto& [kind, d] : devices) {
    if (d.idle_w < 0.0 || d.w_per_bps < 0.0 || d.pue < 0.0) {
      throw ConfigError(std::string(to_string(kind)) +
                        ": device coefficients must be non-negative");
    }
  }
}

PowerParams PowerParams::defaults() {
  return power_params_from_json_text(default_power_params_json());
}

double PowerBreakdown::tier(PnTier t) const {
  switch (t) {
    case PnTier::kVn: return vn;
    case PnTier::kNf: return nf;
    case PnTier::kLf: return lf;
    case PnTier::kMf: return mf;
    case PnTier::kCc: return cc;
  }
  return 0.0;
}

namespace {

struct PnUsage {
  double mips = 0.0;
  BitRate traffic_bps = 0;
  std::size_t tasks = 0;
};

std::vector<PnUsage> usage_of(const Topology& topology, const TaskSet& tasks,
                              const Allocation& allocation) {
  std::vector<PnUsage> usage(topology.nodes().size());
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    PnUsage& u = usage[allocation[t].value];
    u.mips += tasks[t].demand_mips;
    u.traffic_bps += tasks[t].data_rate_bps;
    ++u.tasks;
  }
  return usage;
}

}  // namespace

PowerBreakdown total_power(const Topology& topology, const TaskSet& tasks,
                           const Allocation& allocation, const PowerParams& params) {
  const NodeLoad load = node_arrivals(topology, tasks, allocation);
  const std::vector<PnUsage> usage = usage_of(topology, tasks, allocation);
  PowerBreakdown out;
  for (NodeId pn : topology.processing_nodes()) {
    const PnUsage& u = usage[pn.value];
    if (u.tasks == 0) continue;
    const Node& node = topology.node(pn);
    const PnTier tier = node.processor->tier;
    const ProcessorSpec& spec = params.processor(tier);
    if (u.mips > spec.capacity_mips) {
      throw CapacityExceededError(node.name + " needs " + std::to_string(u.mips) +
                                  " MIPS, capacity " + std::to_string(spec.capacity_mips));
    }
    if (spec.ingress_cap_bps > 0 && u.traffic_bps > spec.ingress_cap_bps) {
      throw IngressExceededError(node.name + " receives " + std::to_string(u.traffic_bps) +
                                 " b/s, ingress cap " + std::to_string(spec.ingress_cap_bps));
    }
    const double w = spec.pue * (spec.idle_w + spec.w_per_mips * u.mips) + spec.adapter_w;
    switch (tier) {
      case PnTier::kVn: out.vn += w; break;
      case PnTier::kNf: out.nf += w; break;
      case PnTier::kLf: out.lf += w; break;
      case PnTier::kMf: out.mf += w; break;
      case PnTier::kCc: out.cc += w; break;
    }
  }
  for (const Node& node : topology.nodes()) {
    const BitRate lambda = load.at(node.id);
    if (lambda == 0 || !has_queue(node)) continue;
    const NetDeviceSpec& d = params.device(node.kind);
    out.net += d.pue * (d.idle_w + d.w_per_bps * static_cast<double>(lambda));
  }
  out.total = out.cc + out.mf + out.lf + out.nf + out.vn + out.net;
  return out;
}

FeasibilityReport feasible(const Topology& topology, const TaskSet& tasks,
                           const Allocation& allocation, const PowerParams& params) {
  FeasibilityReport report;
  auto fail = [&report](Violation::Kind kind, std::string detail) {
    report.ok = false;
    report.violations.push_back(Violation{kind, std::move(detail)});
  };
  if (allocation.size() != tasks.size()) {
    fail(Violation::Kind::kMalformed, "allocation covers " +
                                          std::to_string(allocation.size()) +
                                          " tasks, expected " + std::to_string(tasks.size()));
    return report;
  }
  for (std::size_t t = 0; t < allocation.size(); ++t) {
    if (!topology.is_processing_node(allocation[t])) {
      fail(Violation::Kind::kMalformed,
           "task " + std::to_string(t) + " is not mapped to a processing node");
    }
  }
  if (!report.ok) return report;

  const std::vector<PnUsage> usage = usage_of(topology, tasks, allocation);
  for (NodeId pn : topology.processing_nodes()) {
    const PnUsage& u = usage[pn.value];
    if (u.tasks == 0) continue;
    const Node& node = topology.node(pn);
    const ProcessorSpec& spec = params.processor(node.processor->tier);
    if (u.mips > spec.capacity_mips) {
      fail(Violation::Kind::kCapacity, node.name + ": " + std::to_string(u.mips) +
                                           " MIPS > " + std::to_string(spec.capacity_mips));
    }
    if (spec.ingress_cap_bps > 0 && u.traffic_bps > spec.ingress_cap_bps) {
      fail(Violation::Kind::kIngress, node.name + ": " + std::to_string(u.traffic_bps) +
                                          " b/s > " + std::to_string(spec.ingress_cap_bps));
    }
  }
  const NodeLoad load = node_arrivals(topology, tasks, allocation);
  for (const Node& node : topology.nodes()) {
    const BitRate lambda = load.at(node.id);
    if (lambda > 0 && has_queue(node) && lambda >= node.service_rate_bps) {
      fail(Violation::Kind::kUnstableQueue,
           node.name + ": arrivals " + std::to_string(lambda) + " b/s >= service " +
               std::to_string(node.service_rate_bps) + " b/s");
    }
  }
  return report;
}

}  // namespace vecopt
