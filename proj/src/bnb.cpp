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

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "search_support.hpp"
#include "vecopt/optimizer.hpp"

namespace vecopt {
namespace {

struct Option {
  NodeId pn;
  PnTier tier;
  double propagation_s = 0.0;
  std::vector<NodeId> charged;
};

class Search {
 public:
  Search(const Topology& topology, const TaskSet& tasks, const PowerParams& params,
         const ObjectiveWeights& weights, const DelayTables& tables)
      : topology_(topology),
        tasks_(tasks),
        params_(params),
        w_(weights),
        tables_(tables),
        rules_(topology, tasks),
        pns_(topology.processing_nodes()) {
    const std::size_t n_nodes = topology.nodes().size();
    table_of_.resize(n_nodes, nullptr);
    for (const Node& node : topology.nodes()) {
      if (has_queue(node)) table_of_[node.id.value] = &tables.for_rate(node.service_rate_bps);
    }
    options_.resize(tasks.size());
    for (std::size_t t = 0; t < tasks.size(); ++t) {
      for (NodeId pn : pns_) {
        const Path path = route(topology, tasks[t].source, pn);
        options_[t].push_back(Option{pn, topology.node(pn).processor->tier,
                                     propagation_delay(topology, path),
                                     charged_nodes(topology, path)});
      }
    }
    load_.assign(n_nodes, 0);
    flows_.assign(n_nodes, 0);
    mips_.assign(n_nodes, 0.0);
    traffic_.assign(n_nodes, 0);
    count_.assign(n_nodes, 0);
    ranks_.assign(tasks.size(), 0);
    propagation_.assign(tasks.size() + 1, 0.0);
  }

  std::optional<Allocation> run() {
    visit(0);
    return best_alloc_;
  }
  std::size_t explored() const { return explored_; }

 private:
  const ProcessorSpec& spec(const Option& o) const { return params_.processor(o.tier); }

  bool fits(std::size_t t, const Option& o) const {
    const Task& task = tasks_[t];
    const ProcessorSpec& s = spec(o);
    if (mips_[o.pn.value] + task.demand_mips > s.capacity_mips) return false;
    if (s.ingress_cap_bps > 0 && traffic_[o.pn.value] + task.data_rate_bps > s.ingress_cap_bps) {
      return false;
    }
    for (NodeId i : o.charged) {
      if (!table_of_[i.value]->feasible(load_[i.value] + task.data_rate_bps)) return false;
    }
    return true;
  }

  void apply(std::size_t t, const Option& o, int sign) {
    const Task& task = tasks_[t];
    mips_[o.pn.value] += sign * task.demand_mips;
    traffic_[o.pn.value] += sign * task.data_rate_bps;
    count_[o.pn.value] += sign;
    for (NodeId i : o.charged) {
      load_[i.value] += sign * task.data_rate_bps;
      flows_[i.value] += sign;
    }
  }

  // Objective of the first t tasks. Every term only grows as more tasks are
  // placed, so this is also a lower bound for any completion.
  double placed_cost(std::size_t t) const {
    double power = 0.0;
    double queuing = 0.0;
    for (const Node& node : topology_.nodes()) {
      const std::size_t v = node.id.value;
      if (node.processor && count_[v] > 0) {
        const ProcessorSpec& s = params_.processor(node.processor->tier);
        power += s.pue * (s.idle_w + s.w_per_mips * mips_[v]) + s.adapter_w;
      }
      if (load_[v] > 0 && table_of_[v]) {
        const NetDeviceSpec& d = params_.device(node.kind);
        power += d.pue * (d.idle_w + d.w_per_bps * static_cast<double>(load_[v]));
        queuing += static_cast<double>(flows_[v]) * table_of_[v]->delay(load_[v]);
      }
    }
    return w_.alpha * power + w_.beta * propagation_[t] + w_.gamma * queuing;
  }

  // Cheapest standalone cost of placing task u on top of the current loads:
  // load-proportional power, its own propagation and its own queuing delay.
  // Idle power and the delay added to other flows are left out, which keeps
  // the sum over unplaced tasks a valid lower bound.
  double task_bound(std::size_t u) const {
    const Task& task = tasks_[u];
    const double r = static_cast<double>(task.data_rate_bps);
    double best = std::numeric_limits<double>::infinity();
    for (const Option& o : options_[u]) {
      if (!fits(u, o)) continue;
      const ProcessorSpec& s = spec(o);
      double power = s.pue * s.w_per_mips * task.demand_mips;
      double queuing = 0.0;
      for (NodeId i : o.charged) {
        const NetDeviceSpec& d = params_.device(topology_.node(i).kind);
        power += d.pue * d.w_per_bps * r;
        queuing += table_of_[i.value]->delay(load_[i.value] + task.data_rate_bps);
      }
      const double c = w_.alpha * power + w_.beta * o.propagation_s + w_.gamma * queuing;
      if (c < best) best = c;
    }
    return best;
  }

  void visit(std::size_t t) {
    ++explored_;
    const double placed = placed_cost(t);
    if (t == tasks_.size()) {
      if (detail::strictly_better(placed, best_)) {
        best_ = placed;
        Allocation alloc(tasks_.size());
        for (std::size_t k = 0; k < tasks_.size(); ++k) alloc[k] = pns_[ranks_[k]];
        best_alloc_ = std::move(alloc);
      }
      return;
    }
    double bound = placed;
    for (std::size_t u = t; u < tasks_.size(); ++u) bound += task_bound(u);
    if (!(bound < std::numeric_limits<double>::infinity())) return;
    if (best_alloc_ && detail::strictly_better(best_, bound)) return;

    for (std::size_t r = 0; r < pns_.size(); ++r) {
      if (!rules_.allowed(t, r, ranks_)) continue;
      const Option& o = options_[t][r];
      if (!fits(t, o)) continue;
      ranks_[t] = r;
      propagation_[t + 1] = propagation_[t] + o.propagation_s;
      apply(t, o, +1);
      visit(t + 1);
      apply(t, o, -1);
    }
  }

  const Topology& topology_;
  const TaskSet& tasks_;
  const PowerParams& params_;
  ObjectiveWeights w_;
  const DelayTables& tables_;
  detail::SymmetryRules rules_;
  const std::vector<NodeId>& pns_;

  std::vector<const DelayLookupTable*> table_of_;
  std::vector<std::vector<Option>> options_;  // [task][pn rank]
  std::vector<BitRate> load_;
  std::vector<long> flows_;
  std::vector<double> mips_;
  std::vector<BitRate> traffic_;
  std::vector<long> count_;
  std::vector<std::size_t> ranks_;
  std::vector<double> propagation_;  // R of the first t tasks, by depth

  double best_ = std::numeric_limits<double>::infinity();
  std::optional<Allocation> best_alloc_;
  std::size_t explored_ = 0;
};

}  // namespace

SolveResult solve_bnb(const Topology& topology, const TaskSet& tasks,
                      const PowerParams& params, const ObjectiveWeights& weights) {
  weights.validate();
  const DelayTables tables = build_lookup_tables(topology, tasks);
  Search search(topology, tasks, params, weights, tables);
  const std::optional<Allocation> alloc = search.run();
  if (!alloc) {
    throw NoFeasibleAllocationError("no feasible allocation for " +
                                    std::to_string(tasks.size()) + " tasks");
  }
  SolveResult result = evaluate(topology, tasks, *alloc, params, weights, tables);
  result.explored = search.explored();
  return result;
}

}  // namespace vecopt
