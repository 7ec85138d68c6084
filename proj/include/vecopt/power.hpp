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

#ifndef VECOPT_POWER_HPP
#define VECOPT_POWER_HPP

#include <map>
#include <string>
#include <vector>

#include "vecopt/topology.hpp"
#include "vecopt/units.hpp"
#include "vecopt/workload.hpp"

namespace vecopt {

// Power model of one processing tier. An active processor draws
//   pue * (idle_w + w_per_mips * mips) + adapter_w.
// Vehicles use adapter_w for their communication adapter and are limited to
// ingress_cap_bps of task traffic each.
struct ProcessorSpec {
  double capacity_mips = 0.0;
  double idle_w = 0.0;
  double w_per_mips = 0.0;
  double pue = 1.0;
  double adapter_w = 0.0;
  BitRate ingress_cap_bps = 0;  // 0 = unlimited
};

// A network device carrying traffic draws pue * (idle_w + w_per_bps * lambda).
struct NetDeviceSpec {
  double idle_w = 0.0;
  double w_per_bps = 0.0;
  double pue = 1.0;
};

struct PowerParams {
  std::map<PnTier, ProcessorSpec> processors;
  std::map<NodeKind, NetDeviceSpec> devices;

  const ProcessorSpec& processor(PnTier tier) const;
  const NetDeviceSpec& device(NodeKind kind) const;
  void validate() const;

  // Shipped parameter set (see default_power_params_json()).
  static PowerParams defaults();
};

struct PowerBreakdown {
  double cc = 0.0;
  double mf = 0.0;
  double lf = 0.0;
  double nf = 0.0;
  double vn = 0.0;
  double net = 0.0;
  double total = 0.0;

  double tier(PnTier t) const;
};

// Throws CapacityExceededError / IngressExceededError.
PowerBreakdown total_power(const Topology& topology, const TaskSet& tasks,
                           const Allocation& allocation, const PowerParams& params);

struct Violation {
  enum class Kind { kMalformed, kCapacity, kIngress, kUnstableQueue };
  Kind kind;
  std::string detail;
};

struct FeasibilityReport {
  bool ok = true;
  std::vector<Violation> violations;
};

FeasibilityReport feasible(const Topology& topology, const TaskSet& tasks,
                           const Allocation& allocation, const PowerParams& params);

}  // namespace vecopt

#endif  // VECOPT_POWER_HPP
