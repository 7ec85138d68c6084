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

#ifndef VECOPT_SRC_SEARCH_SUPPORT_HPP
#define VECOPT_SRC_SEARCH_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "vecopt/optimizer.hpp"
#include "vecopt/topology.hpp"
#include "vecopt/workload.hpp"

namespace vecopt::detail {

inline bool ties(double a, double b) {
  if (a == b) return true;
  if (!std::isfinite(a) || !std::isfinite(b)) return false;
  return std::abs(a - b) <= kTieTolerance * std::max(std::abs(a), std::abs(b));
}

inline bool strictly_better(double candidate, double best) {
  return candidate < best && !ties(candidate, best);
}

// Symmetry breaking shared by the enumerating solvers. Every allocation has a
// lexicographically smallest equivalent under (a) relabelling interchangeable
// vehicles and (b) permuting identical tasks; that representative assigns
// vehicle labels in first-use order within each group of interchangeable
// vehicles and gives identical tasks non-decreasing PN ranks. Restricting the
// search to such vectors therefore keeps the lex-min optimum.
class SymmetryRules {
 public:
  SymmetryRules(const Topology& topology, const TaskSet& tasks) {
    const std::vector<NodeId>& pns = topology.processing_nodes();
    group_start_.resize(pns.size());
    vn_.resize(pns.size());
    for (std::size_t r = 0; r < pns.size(); ++r) {
      const Node& node = topology.node(pns[r]);
      vn_[r] = node.processor->tier == PnTier::kVn;
      group_start_[r] = r;
      if (vn_[r] && r > 0 && vn_[r - 1] &&
          equivalent_vehicles(topology, pns[r - 1], pns[r])) {
        group_start_[r] = group_start_[r - 1];
      }
    }
    previous_twin_.assign(tasks.size(), kNone);
    for (std::size_t t = 0; t < tasks.size(); ++t) {
      for (std::size_t u = t; u-- > 0;) {
        if (tasks[u].demand_mips == tasks[t].demand_mips &&
            tasks[u].data_rate_bps == tasks[t].data_rate_bps) {
          previous_twin_[t] = u;
          break;
        }
      }
    }
  }

  bool is_vn(std::size_t rank) const { return vn_[rank]; }

  // Whether task t may take PN rank r given the ranks of tasks 0..t-1.
  bool allowed(std::size_t t, std::size_t r, const std::vector<std::size_t>& ranks) const {
    if (previous_twin_[t] != kNone && r < ranks[previous_twin_[t]]) return false;
    if (vn_[r] && r != group_start_[r]) {
      const auto first = ranks.begin();
      const auto last = ranks.begin() + static_cast<std::ptrdiff_t>(t);
      if (std::find(first, last, r - 1) == last) return false;
    }
    return true;
  }

 private:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  static bool equivalent_vehicles(const Topology& topology, NodeId a, NodeId b) {
    const Link* la = topology.link_between(topology.ap_wireless(), a);
    const Link* lb = topology.link_between(topology.ap_wireless(), b);
    return la && lb && la->distance_m == lb->distance_m && la->medium == lb->medium;
  }

  std::vector<std::size_t> group_start_;
  std::vector<bool> vn_;
  std::vector<std::size_t> previous_twin_;
};

}  // namespace vecopt::detail

#endif  // VECOPT_SRC_SEARCH_SUPPORT_HPP
