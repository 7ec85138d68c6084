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

#include "vecopt/optimizer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <utility>

#include "search_support.hpp"

namespace vecopt {

void ObjectiveWeights::validate() const {
  if (!(alpha >= 0.0) || !(beta >= 0.0) || !(gamma >= 0.0)) {
    throw InvalidRangeError("objective weights must be non-negative");
  }
  if (alpha == 0.0 && beta == 0.0 && gamma == 0.0) {
    throw InvalidRangeError("objective weights must not all be zero");
  }
  if (!std::isfinite(alpha) || !std::isfinite(beta) || !std::isfinite(gamma)) {
    throw InvalidRangeError("objective weights must be finite");
  }
}

namespace {

constexpr std::array<std::pair<ObjectiveCase, std::string_view>, 6> kCaseNames{{
    {ObjectiveCase::kPower, "power"},
    {ObjectiveCase::kPropagation, "prop"},
    {ObjectiveCase::kPowerPropagation, "power+prop"},
    {ObjectiveCase::kQueuing, "queue"},
    {ObjectiveCase::kPowerQueuing, "power+queue"},
    {ObjectiveCase::kAll, "all"},
}};

}  // namespace

std::string_view to_string(ObjectiveCase c) {
  for (const auto& [k, name] : kCaseNames) {
    if (k == c) return name;
  }
  return "unknown";
}

ObjectiveCase objective_case_from_string(std::string_view text) {
  for (const auto& [k, name] : kCaseNames) {
    if (name == text) return k;
  }
  throw ConfigError("unknown objective '" + std::string(text) +
                    "' (expected power|prop|queue|power+prop|power+queue|all)");
}

bool is_joint(ObjectiveCase c) {
  return c == ObjectiveCase::kPowerPropagation || c == ObjectiveCase::kPowerQueuing ||
         c == ObjectiveCase::kAll;
}

ObjectiveWeights single_term_weights(ObjectiveCase c) {
  switch (c) {
    case ObjectiveCase::kPower: return {1.0, 0.0, 0.0};
    case ObjectiveCase::kPropagation: return {0.0, 1.0, 0.0};
    case ObjectiveCase::kQueuing: return {0.0, 0.0, 1.0};
    default: break;
  }
  throw InvalidRangeError("objective '" + std::string(to_string(c)) +
                          "' needs calibrated weights");
}

double SolveResult::tier_traffic_mbps(const Topology& topology, PnTier tier) const {
  BitRate sum = 0;
  for (NodeId pn : topology.processing_nodes()) {
    if (topology.node(pn).processor->tier == tier) sum += pn_traffic_bps[pn.value];
  }
  return to_mbps(sum);
}

std::size_t SolveResult::tier_tasks(const Topology& topology, PnTier tier) const {
  return static_cast<std::size_t>(std::count_if(
      allocation.begin(), allocation.end(), [&](NodeId pn) {
        return topology.node(pn).processor->tier == tier;
      }));
}

SolveResult evaluate(const Topology& topology, const TaskSet& tasks,
                     const Allocation& allocation, const PowerParams& params,
                     const ObjectiveWeights& weights) {
  return evaluate(topology, tasks, allocation, params, weights,
                  build_lookup_tables(topology, tasks));
}

SolveResult evaluate(const Topology& topology, const TaskSet& tasks,
                     const Allocation& allocation, const PowerParams& params,
                     const ObjectiveWeights& weights, const DelayTables& tables) {
  weights.validate();
  const FeasibilityReport report = feasible(topology, tasks, allocation, params);
  if (!report.ok) {
    std::string what = "infeasible allocation:";
    for (const Violation& v : report.violations) what += " " + v.detail + ";";
    throw InfeasibleError(what);
  }
  SolveResult out;
  out.allocation = allocation;
  out.weights = weights;
  out.power = total_power(topology, tasks, allocation, params);
  out.delays = path_delays(topology, tasks, allocation, tables);
  const NodeLoad load = node_arrivals(topology, tasks, allocation);
  out.node_arrival_bps = load.arrival_bps;
  out.node_queuing_s = node_queuing_delays(topology, load, tables);
  out.pn_mips.assign(topology.nodes().size(), 0.0);
  out.pn_traffic_bps.assign(topology.nodes().size(), 0);
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    out.pn_mips[allocation[t].value] += tasks[t].demand_mips;
    out.pn_traffic_bps[allocation[t].value] += tasks[t].data_rate_bps;
  }
  out.P = out.power.total;
  out.R = out.delays.total_propagation_s;
  out.Q = out.delays.total_queuing_s;
  out.objective = weights.alpha * out.P + weights.beta * out.R + weights.gamma * out.Q;
  return out;
}

bool lex_less(const Topology& topology, const Allocation& a, const Allocation& b) {
  return std::lexicographical_compare(
      a.begin(), a.end(), b.begin(), b.end(), [&topology](NodeId x, NodeId y) {
        return topology.pn_rank(x) < topology.pn_rank(y);
      });
}

SolveResult solve_exhaustive(const Topology& topology, const TaskSet& tasks,
                             const PowerParams& params, const ObjectiveWeights& weights) {
  weights.validate();
  const DelayTables tables = build_lookup_tables(topology, tasks);
  const std::vector<NodeId>& pns = topology.processing_nodes();
  const detail::SymmetryRules rules(topology, tasks);

  // Keeps every candidate within tie tolerance of the best seen so far.
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::pair<double, Allocation>> front;
  std::size_t explored = 0;

  Allocation alloc(tasks.size());
  std::vector<std::size_t> ranks(tasks.size());
  auto visit = [&](auto&& self, std::size_t t) -> void {
    if (t == tasks.size()) {
      ++explored;
      if (!feasible(topology, tasks, alloc, params).ok) return;
      const double obj = evaluate(topology, tasks, alloc, params, weights, tables).objective;
      if (detail::strictly_better(obj, best)) {
        best = obj;
        std::erase_if(front, [&](const auto& c) { return !detail::ties(c.first, best); });
        front.emplace_back(obj, alloc);
      } else if (detail::ties(obj, best)) {
        front.emplace_back(obj, alloc);
      }
      return;
    }
    for (std::size_t r = 0; r < pns.size(); ++r) {
      if (!rules.allowed(t, r, ranks)) continue;
      ranks[t] = r;
      alloc[t] = pns[r];
      self(self, t + 1);
    }
  };
  visit(visit, 0);

  if (front.empty()) {
    throw NoFeasibleAllocationError("no feasible allocation for " +
                                    std::to_string(tasks.size()) + " tasks");
  }
  const Allocation* chosen = nullptr;
  for (const auto& [obj, a] : front) {
    if (!detail::ties(obj, best)) continue;
    if (!chosen || lex_less(topology, a, *chosen)) chosen = &a;
  }
  SolveResult result = evaluate(topology, tasks, *chosen, params, weights, tables);
  result.explored = explored;
  return result;
}

std::string_view to_string(CalibrationMode mode) {
  switch (mode) {
    case CalibrationMode::kPowerPropagation: return "P+R";
    case CalibrationMode::kPowerQueuing: return "P+Q";
    case CalibrationMode::kAll: return "P+R+Q";
  }
  return "unknown";
}

CalibrationMode calibration_mode_for(ObjectiveCase c) {
  switch (c) {
    case ObjectiveCase::kPowerPropagation: return CalibrationMode::kPowerPropagation;
    case ObjectiveCase::kPowerQueuing: return CalibrationMode::kPowerQueuing;
    case ObjectiveCase::kAll: return CalibrationMode::kAll;
    default: break;
  }
  throw InvalidRangeError("objective '" + std::string(to_string(c)) +
                          "' is not a joint objective");
}

double CalibrationReport::propagation_imbalance() const {
  const double p = weights.alpha * at_optimum.P;
  if (p == 0.0) return 0.0;
  return std::abs(p - weights.beta * at_optimum.R) / p;
}

double CalibrationReport::queuing_imbalance() const {
  const double p = weights.alpha * at_optimum.P;
  if (p == 0.0) return 0.0;
  return std::abs(p - weights.gamma * at_optimum.Q) / p;
}

CalibrationReport calibrate_weights(const JointSolver& solve, CalibrationMode mode,
                                    const CalibrationOptions& options) {
  const bool with_r = mode != CalibrationMode::kPowerQueuing;
  const bool with_q = mode != CalibrationMode::kPowerPropagation;
  CalibrationReport report;
  ObjectiveWeights w{1.0, 0.0, 0.0};

  const double p_only = solve({1.0, 0.0, 0.0}).P;
  if (with_r) {
    const double r_only = solve({0.0, 1.0, 0.0}).R;
    w.beta = r_only > 0.0 ? p_only / r_only : 0.0;
  }
  if (with_q) {
    const double q_only = solve({0.0, 0.0, 1.0}).Q;
    w.gamma = q_only > 0.0 ? p_only / q_only : 0.0;
  }

  // The report always pairs the weights with the totals they produced.
  for (int it = 1; it <= options.max_iterations; ++it) {
    report.iterations = it;
    report.weights = w;
    report.at_optimum = solve(w);
    const bool r_ok = !with_r || report.propagation_imbalance() <= options.tolerance;
    const bool q_ok = !with_q || report.queuing_imbalance() <= options.tolerance;
    if (r_ok && q_ok) {
      report.converged = true;
      return report;
    }
    const double p = w.alpha * report.at_optimum.P;
    if (with_r && w.beta > 0.0 && report.at_optimum.R > 0.0) {
      w.beta *= p / (w.beta * report.at_optimum.R);
    }
    if (with_q && w.gamma > 0.0 && report.at_optimum.Q > 0.0) {
      w.gamma *= p / (w.gamma * report.at_optimum.Q);
    }
  }
  throw NonConvergenceError("weight calibration (" + std::string(to_string(mode)) +
                                ") did not converge in " +
                                std::to_string(options.max_iterations) + " iterations",
                            report);
}

CalibrationReport calibrate_weights(const Topology& topology,
                                    std::span<const TaskSet> points,
                                    const PowerParams& params, CalibrationMode mode,
                                    const CalibrationOptions& options) {
  if (points.empty()) throw InvalidRangeError("calibration needs at least one task set");
  JointSolver solve = [&](const ObjectiveWeights& w) {
    ObjectiveTotals sum;
    for (const TaskSet& tasks : points) {
      const SolveResult r = solve_bnb(topology, tasks, params, w);
      sum.P += r.P;
      sum.R += r.R;
      sum.Q += r.Q;
    }
    return sum;
  };
  return calibrate_weights(solve, mode, options);
}

}  // namespace vecopt
