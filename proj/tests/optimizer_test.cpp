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

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include <vecopt/delay.hpp>
#include <vecopt/error.hpp>
#include <vecopt/optimizer.hpp>

#include "support/test_support.hpp"

namespace vecopt {
namespace {

using testing::all_on;
using testing::names;
using testing::node;
using testing::pn;
using testing::relative_equal;
using testing::sweep_point;
using testing::tasks_on;

constexpr double kC = 299'792'000.0;

// Exhaustive search over every task -> PN mapping with no symmetry reduction.
// Keeps the first minimum in lexicographic PN-rank order, treating values
// within kTieTolerance as equal.
struct BruteForce {
  std::optional<Allocation> allocation;
  double objective = std::numeric_limits<double>::infinity();
};

BruteForce brute_force(const Topology& t, const TaskSet& tasks, const PowerParams& p,
                       const ObjectiveWeights& w) {
  const DelayTables tables = build_lookup_tables(t, tasks);
  const std::vector<NodeId>& pns = t.processing_nodes();
  const std::size_t n = tasks.size();
  std::vector<std::size_t> digits(n, 0);
  BruteForce best;
  while (true) {
    Allocation a;
    for (std::size_t d : digits) a.push_back(pns[d]);
    try {
      const double v = evaluate(t, tasks, a, p, w, tables).objective;
      const bool tie = std::abs(v - best.objective) <=
                       kTieTolerance * std::max(std::abs(v), std::abs(best.objective));
      // Enumeration runs in lexicographic order, so a tie never replaces.
      if (!best.allocation || (v < best.objective && !tie)) {
        best.allocation = a;
        best.objective = v;
      }
    } catch (const InfeasibleError&) {
    }
    std::size_t k = n;
    while (k > 0 && ++digits[k - 1] == pns.size()) digits[--k] = 0;
    if (k == 0) break;
  }
  return best;
}

struct RandomInstance {
  Topology topology;
  TaskSet tasks;
  PowerParams params;
  ObjectiveWeights weights;
};

RandomInstance random_instance(std::mt19937& rng, std::size_t max_tasks) {
  std::uniform_int_distribution<std::size_t> n_tasks(1, max_tasks);
  std::uniform_int_distribution<std::size_t> n_vn(0, 4);
  std::uniform_int_distribution<int> demand(100, 1000);
  std::uniform_int_distribution<int> rate(0, 2);
  std::uniform_int_distribution<int> objective(1, 6);
  std::uniform_real_distribution<double> scale(0.1, 10.0);
  std::uniform_int_distribution<int> nf_cap(5, 60);

  ArchitectureOptions o;
  o.n_vn = n_vn(rng);
  o.n_sources = n_tasks(rng);
  o.ap_wireless_rate = std::array<BitRate, 3>{1 * kGbps, 5 * kGbps, 10 * kGbps}[rate(rng)];
  Topology t = default_architecture(o);
  std::vector<double> demands;
  // Some repeated demands exercise the identical-task symmetry rule.
  for (std::size_t i = 0; i < o.n_sources; ++i) {
    demands.push_back(i > 0 && rng() % 3 == 0 ? demands.back() : demand(rng));
  }
  TaskSet tasks = make_task_set(demands, 0.1, t.source_nodes());
  PowerParams p = testing::params_with_nf_capacity(100.0 * nf_cap(rng));

  ObjectiveWeights w;
  switch (static_cast<ObjectiveCase>(objective(rng))) {
    case ObjectiveCase::kPower: w = {1, 0, 0}; break;
    case ObjectiveCase::kPropagation: w = {0, 1, 0}; break;
    case ObjectiveCase::kQueuing: w = {0, 0, 1}; break;
    case ObjectiveCase::kPowerPropagation: w = {1, 2e6 * scale(rng), 0}; break;
    case ObjectiveCase::kPowerQueuing: w = {1, 0, 3e6 * scale(rng)}; break;
    case ObjectiveCase::kAll: w = {1, 2e6 * scale(rng), 3e6 * scale(rng)}; break;
  }
  return {std::move(t), std::move(tasks), std::move(p), w};
}

ObjectiveWeights midpoint_weights(const Topology& t, ObjectiveCase c) {
  const std::vector<TaskSet> mid{sweep_point(t, 500.0)};
  try {
    return calibrate_weights(t, mid, PowerParams::defaults(), calibration_mode_for(c)).weights;
  } catch (const NonConvergenceError& e) {
    return e.report().weights;
  }
}

TEST(Weights, Validation) {
  EXPECT_NO_THROW((ObjectiveWeights{1, 0, 0}.validate()));
  EXPECT_THROW((ObjectiveWeights{0, 0, 0}.validate()), InvalidRangeError);
  EXPECT_THROW((ObjectiveWeights{1, -1, 0}.validate()), InvalidRangeError);
  EXPECT_THROW((ObjectiveWeights{1, std::nan(""), 0}.validate()), InvalidRangeError);
}

TEST(Weights, ObjectiveCases) {
  for (ObjectiveCase c : {ObjectiveCase::kPower, ObjectiveCase::kPropagation,
                          ObjectiveCase::kPowerPropagation, ObjectiveCase::kQueuing,
                          ObjectiveCase::kPowerQueuing, ObjectiveCase::kAll}) {
    EXPECT_EQ(objective_case_from_string(to_string(c)), c);
  }
  EXPECT_THROW(objective_case_from_string("speed"), ConfigError);
  EXPECT_THROW(single_term_weights(ObjectiveCase::kAll), InvalidRangeError);
  EXPECT_EQ(single_term_weights(ObjectiveCase::kQueuing).gamma, 1.0);
  EXPECT_EQ(calibration_mode_for(ObjectiveCase::kPowerQueuing), CalibrationMode::kPowerQueuing);
  EXPECT_THROW(calibration_mode_for(ObjectiveCase::kPower), InvalidRangeError);
}

TEST(Evaluate, PowerOnlyObjectiveIsPower) {
  const Topology t = default_architecture(8, 1 * kGbps);
  const TaskSet tasks = sweep_point(t, 300.0);
  const SolveResult r = evaluate(t, tasks, all_on(tasks, pn(t, PnTier::kNf)),
                                 PowerParams::defaults(), {1, 0, 0});
  EXPECT_EQ(r.objective, r.P);
  EXPECT_EQ(r.P, r.power.total);
}

TEST(Evaluate, PropagationOnlyOnVehicles) {
  const Topology t = default_architecture(10, 1 * kGbps);
  const TaskSet tasks = sweep_point(t, 300.0);
  const SolveResult r =
      evaluate(t, tasks, t.vehicular_nodes(), PowerParams::defaults(), {0, 1, 0});
  EXPECT_DOUBLE_EQ(r.objective, 10 * 100.0 / kC);
  EXPECT_EQ(r.objective, r.R);
}

TEST(Evaluate, QueuingOnlyOnNearFog) {
  const Topology t = default_architecture(8, 1 * kGbps);
  const TaskSet tasks = sweep_point(t, 300.0);
  const SolveResult r = evaluate(t, tasks, all_on(tasks, pn(t, PnTier::kNf)),
                                 PowerParams::defaults(), {0, 0, 1});
  const double per_node = 1.0 / (10e9 / 12000.0 - 300e6 / 12000.0);
  EXPECT_DOUBLE_EQ(r.objective, 10 * 2 * per_node);
  EXPECT_NEAR(r.objective / 10 * 1e6, 2.474, 5e-4);
}

TEST(Evaluate, ReportsPerNodeQuantities) {
  const Topology t = default_architecture(8, 1 * kGbps);
  const TaskSet tasks = sweep_point(t, 700.0);
  Allocation a = all_on(tasks, pn(t, PnTier::kNf));
  a[8] = t.vehicular_nodes()[0];
  a[9] = t.vehicular_nodes()[1];
  const SolveResult r = evaluate(t, tasks, a, PowerParams::defaults(), {1, 0, 0});
  EXPECT_EQ(r.node_arrival_bps[t.ap_wireless().value], 140 * kMbps);
  EXPECT_EQ(r.node_arrival_bps[t.ap_wired().value], 560 * kMbps);
  EXPECT_EQ(r.pn_mips[pn(t, PnTier::kNf).value], 5600.0);
  EXPECT_EQ(r.pn_traffic_bps[t.vehicular_nodes()[0].value], 70 * kMbps);
  EXPECT_DOUBLE_EQ(r.tier_traffic_mbps(t, PnTier::kVn), 140.0);
  EXPECT_EQ(r.tier_tasks(t, PnTier::kNf), 8u);
  EXPECT_GT(r.node_queuing_s[t.ap_wireless().value], 0.0);
  EXPECT_EQ(r.node_queuing_s[node(t, "OLT").value], 0.0);
}

TEST(Evaluate, RejectsInfeasibleAllocations) {
  const Topology t = default_architecture(8, 1 * kGbps);
  const TaskSet tasks = sweep_point(t, 700.0);
  EXPECT_THROW(evaluate(t, tasks, all_on(tasks, pn(t, PnTier::kNf)), PowerParams::defaults(),
                        {1, 0, 0}),
               InfeasibleError);
}

TEST(EvaluateProperty, ObjectiveRecomposes) {
  std::mt19937 rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const RandomInstance in = random_instance(rng, 6);
    const std::vector<NodeId>& pns = in.topology.processing_nodes();
    Allocation a;
    for (std::size_t i = 0; i < in.tasks.size(); ++i) a.push_back(pns[rng() % pns.size()]);
    try {
      const SolveResult r = evaluate(in.topology, in.tasks, a, in.params, in.weights);
      const ObjectiveWeights& w = in.weights;
      EXPECT_TRUE(relative_equal(r.objective, w.alpha * r.P + w.beta * r.R + w.gamma * r.Q,
                                 1e-12));
      EXPECT_DOUBLE_EQ(r.R, r.delays.total_propagation_s);
      EXPECT_DOUBLE_EQ(r.Q, r.delays.total_queuing_s);
    } catch (const InfeasibleError&) {
    }
  }
}

TEST(LexOrder, FollowsPnRank) {
  const Topology t = default_architecture(2, 1 * kGbps);
  const NodeId vn1 = node(t, "VN1");
  const NodeId nf = pn(t, PnTier::kNf);
  const NodeId cc = pn(t, PnTier::kCc);
  EXPECT_TRUE(lex_less(t, {vn1, cc}, {nf, vn1}));
  EXPECT_TRUE(lex_less(t, {nf, nf}, {nf, cc}));
  EXPECT_FALSE(lex_less(t, {nf, nf}, {nf, nf}));
}

TEST(Solve, ScenarioOnePowerTransitions) {
  const Topology t = default_architecture(8, 1 * kGbps);
  const PowerParams p = testing::params_with_nf_capacity(7000.0);
  const SolveResult low = solve_exhaustive(t, sweep_point(t, 300.0), p, {1, 0, 0});
  EXPECT_EQ(tasks_on(t, low.allocation, PnTier::kVn), 10u);
  const SolveResult mid = solve_exhaustive(t, sweep_point(t, 400.0), p, {1, 0, 0});
  EXPECT_EQ(mid.allocation, all_on(sweep_point(t, 400.0), pn(t, PnTier::kNf)));
}

TEST(Solve, QueuingAvoidsTheWirelessInterface) {
  const Topology t = default_architecture(8, 1 * kGbps);
  const TaskSet tasks = sweep_point(t, 300.0);
  const SolveResult r = solve_exhaustive(t, tasks, PowerParams::defaults(), {0, 0, 1});
  EXPECT_EQ(r.allocation, all_on(tasks, pn(t, PnTier::kNf)));
}

TEST(Solve, TiesGoToTheFirstVehicles) {
  const Topology t = default_architecture(8, 1 * kGbps);
  const TaskSet tasks = sweep_point(t, 100.0);
  const SolveResult r = solve_bnb(t, tasks, PowerParams::defaults(), {0, 1, 0});
  // Every vehicle is equally close; the lexicographic minimum packs the
  // lowest-ranked vehicles up to their ingress cap.
  EXPECT_EQ(names(t, r.allocation),
            (std::vector<std::string>{"VN1", "VN1", "VN1", "VN1", "VN1", "VN1", "VN1", "VN2",
                                      "VN2", "VN2"}));
}

TEST(Solve, NoFeasibleAllocationWithOnlyVehicles) {
  ArchitectureOptions o;
  o.n_vn = 10;
  o.n_sources = 11;
  const Topology full = default_architecture(o);
  std::vector<Node> nodes = full.nodes();
  for (Node& n : nodes) {
    if (n.kind != NodeKind::kVehicularNode) n.processor.reset();
  }
  const Topology t(nodes, full.links());
  ASSERT_EQ(t.processing_nodes().size(), 10u);
  const TaskSet tasks = testing::uniform_tasks(t, 700.0, 11);
  EXPECT_THROW(solve_exhaustive(t, tasks, PowerParams::defaults(), {1, 0, 0}),
               NoFeasibleAllocationError);
  EXPECT_THROW(solve_bnb(t, tasks, PowerParams::defaults(), {1, 0, 0}),
               NoFeasibleAllocationError);
}

TEST(Solve, EmptyTaskSet) {
  const Topology t = default_architecture(8, 1 * kGbps);
  const SolveResult r = solve_bnb(t, TaskSet{}, PowerParams::defaults(), {1, 0, 0});
  EXPECT_TRUE(r.allocation.empty());
  EXPECT_EQ(r.objective, 0.0);
}

TEST(SolveOracle, MatchesUnreducedBruteForce) {
  std::mt19937 rng(1234);
  for (int trial = 0; trial < 40; ++trial) {
    const RandomInstance in = random_instance(rng, 5);
    const BruteForce oracle = brute_force(in.topology, in.tasks, in.params, in.weights);
    if (!oracle.allocation) {
      EXPECT_THROW(solve_exhaustive(in.topology, in.tasks, in.params, in.weights),
                   NoFeasibleAllocationError);
      continue;
    }
    const SolveResult ex = solve_exhaustive(in.topology, in.tasks, in.params, in.weights);
    EXPECT_TRUE(relative_equal(ex.objective, oracle.objective, 1e-12))
        << "trial " << trial << ": " << ex.objective << " vs " << oracle.objective;
    EXPECT_EQ(ex.allocation, *oracle.allocation) << "trial " << trial;
  }
}

TEST(SolveOracle, BranchAndBoundMatchesExhaustiveOnRandomInstances) {
  std::mt19937 rng(99);
  int feasible = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const RandomInstance in = random_instance(rng, 6);
    std::optional<SolveResult> ex;
    try {
      ex = solve_exhaustive(in.topology, in.tasks, in.params, in.weights);
    } catch (const NoFeasibleAllocationError&) {
    }
    if (!ex) {
      EXPECT_THROW(solve_bnb(in.topology, in.tasks, in.params, in.weights),
                   NoFeasibleAllocationError);
      continue;
    }
    ++feasible;
    const SolveResult bb = solve_bnb(in.topology, in.tasks, in.params, in.weights);
    EXPECT_EQ(bb.objective, ex->objective) << "trial " << trial;
    EXPECT_EQ(bb.allocation, ex->allocation) << "trial " << trial;
  }
  EXPECT_GT(feasible, 80);
}

TEST(SolveOracle, BranchAndBoundMatchesExhaustiveOnTheDefaultSweep) {
  const Topology t = default_architecture(8, 1 * kGbps);
  const PowerParams p = PowerParams::defaults();
  for (ObjectiveCase c : {ObjectiveCase::kPower, ObjectiveCase::kPropagation,
                          ObjectiveCase::kPowerPropagation, ObjectiveCase::kQueuing,
                          ObjectiveCase::kPowerQueuing, ObjectiveCase::kAll}) {
    const ObjectiveWeights w = is_joint(c) ? midpoint_weights(t, c) : single_term_weights(c);
    for (int k = 1; k <= 10; ++k) {
      const TaskSet tasks = sweep_point(t, 100.0 * k);
      const SolveResult ex = solve_exhaustive(t, tasks, p, w);
      const SolveResult bb = solve_bnb(t, tasks, p, w);
      EXPECT_EQ(bb.objective, ex.objective) << to_string(c) << " at " << 100 * k;
      EXPECT_EQ(bb.allocation, ex.allocation) << to_string(c) << " at " << 100 * k;
    }
  }
}

TEST(SolveProperty, WeightScalingKeepsTheArgmin) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const RandomInstance in = random_instance(rng, 6);
    std::optional<SolveResult> base;
    try {
      base = solve_bnb(in.topology, in.tasks, in.params, in.weights);
    } catch (const NoFeasibleAllocationError&) {
      continue;
    }
    for (double factor : {1e-3, 0.5, 7.0, 1e4}) {
      const SolveResult scaled =
          solve_bnb(in.topology, in.tasks, in.params, in.weights.scaled(factor));
      EXPECT_EQ(scaled.allocation, base->allocation) << "trial " << trial << " x" << factor;
    }
  }
}

TEST(SolveProperty, DegenerateWeightsMinimiseTheirTerm) {
  std::mt19937 rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    RandomInstance in = random_instance(rng, 5);
    const auto& pns = in.topology.processing_nodes();
    const PowerParams& p = in.params;
    try {
      const SolveResult bp = solve_bnb(in.topology, in.tasks, p, {1, 0, 0});
      const SolveResult br = solve_bnb(in.topology, in.tasks, p, {0, 1, 0});
      const SolveResult bq = solve_bnb(in.topology, in.tasks, p, {0, 0, 1});
      for (int sample = 0; sample < 50; ++sample) {
        Allocation a;
        for (std::size_t i = 0; i < in.tasks.size(); ++i) a.push_back(pns[rng() % pns.size()]);
        try {
          const SolveResult r = evaluate(in.topology, in.tasks, a, p, {1, 1, 1});
          EXPECT_LE(bp.P, r.P * (1 + 1e-12));
          EXPECT_LE(br.R, r.R * (1 + 1e-12));
          EXPECT_LE(bq.Q, r.Q * (1 + 1e-12));
        } catch (const InfeasibleError&) {
        }
      }
    } catch (const NoFeasibleAllocationError&) {
    }
  }
}

TEST(SolveProperty, VehiclePermutationKeepsTheObjective) {
  const Topology t = default_architecture(8, 1 * kGbps);
  const PowerParams p = PowerParams::defaults();
  const ObjectiveWeights w = midpoint_weights(t, ObjectiveCase::kAll);
  std::vector<NodeId> perm = t.vehicular_nodes();
  std::mt19937 rng(4);
  for (int k = 1; k <= 7; ++k) {
    const TaskSet tasks = sweep_point(t, 100.0 * k);
    const SolveResult best = solve_bnb(t, tasks, p, {1, 0, 0});
    for (int round = 0; round < 5; ++round) {
      std::shuffle(perm.begin(), perm.end(), rng);
      Allocation a = best.allocation;
      for (NodeId& id : a) {
        const auto& vns = t.vehicular_nodes();
        const auto it = std::find(vns.begin(), vns.end(), id);
        if (it != vns.end()) id = perm[static_cast<std::size_t>(it - vns.begin())];
      }
      EXPECT_EQ(evaluate(t, tasks, a, p, w).objective,
                evaluate(t, tasks, best.allocation, p, w).objective);
    }
  }
}

TEST(SolveProperty, CloserProcessorsNeverAddPropagation) {
  // Moving a task to a processor with a shorter route cannot increase R.
  const Topology t = default_architecture(4, 1 * kGbps);
  const std::vector<PnTier> tiers{PnTier::kNf, PnTier::kLf, PnTier::kMf, PnTier::kCc};
  const PowerParams p = PowerParams::defaults();
  std::mt19937 rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const TaskSet tasks = testing::uniform_tasks(t, 100.0 + 100.0 * (rng() % 5), 6);
    Allocation far;
    for (std::size_t i = 0; i < tasks.size(); ++i) far.push_back(pn(t, tiers[1 + rng() % 3]));
    Allocation near = far;
    for (NodeId& id : near) {
      const auto it =
          std::find(tiers.begin(), tiers.end(), t.node(id).processor->tier);
      if (rng() % 2 == 0) id = pn(t, *(it - 1));
    }
    EXPECT_LE(evaluate(t, tasks, near, p, {0, 1, 0}).R, evaluate(t, tasks, far, p, {0, 1, 0}).R);
  }
}

TEST(Calibration, ConstantTotalsGiveTheRatio) {
  int calls = 0;
  const JointSolver solver = [&calls](const ObjectiveWeights&) {
    ++calls;
    return ObjectiveTotals{100.0, 1e-3, 1e-3};
  };
  const CalibrationReport pr = calibrate_weights(solver, CalibrationMode::kPowerPropagation);
  EXPECT_TRUE(pr.converged);
  EXPECT_DOUBLE_EQ(pr.weights.beta, 1e5);
  EXPECT_EQ(pr.weights.gamma, 0.0);
  EXPECT_GT(calls, 0);
  const CalibrationReport all = calibrate_weights(solver, CalibrationMode::kAll);
  EXPECT_DOUBLE_EQ(all.weights.beta, 1e5);
  EXPECT_DOUBLE_EQ(all.weights.gamma, 1e5);
  EXPECT_LE(all.propagation_imbalance(), 1e-12);
  EXPECT_LE(all.queuing_imbalance(), 1e-12);
}

TEST(Calibration, OscillationReportsNonConvergence) {
  // Above beta = 2e5 the joint optimum needs beta = 1e5 for the equality and
  // below it needs 3e5, so the multiplicative update alternates forever.
  const JointSolver solver = [](const ObjectiveWeights& w) {
    if (w.beta == 0.0) return ObjectiveTotals{100.0, 5e-3, 0.0};
    if (w.alpha == 0.0) return ObjectiveTotals{300.0, 1e-3, 0.0};
    return w.beta >= 2e5 ? ObjectiveTotals{100.0, 1e-3, 0.0} : ObjectiveTotals{300.0, 1e-3, 0.0};
  };
  CalibrationOptions o;
  o.max_iterations = 10;
  try {
    calibrate_weights(solver, CalibrationMode::kPowerPropagation, o);
    FAIL() << "expected NonConvergenceError";
  } catch (const NonConvergenceError& e) {
    EXPECT_FALSE(e.report().converged);
    EXPECT_GT(e.report().weights.beta, 0.0);
    EXPECT_GT(e.report().propagation_imbalance(), 0.05);
  }
}

TEST(CalibrationProperty, DefaultSweepMeetsTheEqualities) {
  const Topology t = default_architecture(8, 1 * kGbps);
  const PowerParams p = PowerParams::defaults();
  const std::vector<TaskSet> mid{sweep_point(t, 500.0)};
  for (CalibrationMode mode :
       {CalibrationMode::kPowerPropagation, CalibrationMode::kPowerQueuing, CalibrationMode::kAll}) {
    try {
      const CalibrationReport r = calibrate_weights(t, mid, p, mode);
      ASSERT_TRUE(r.converged);
      // Re-solve independently with the returned weights.
      const SolveResult s = solve_bnb(t, mid[0], p, r.weights);
      const double ap = r.weights.alpha * s.P;
      if (mode != CalibrationMode::kPowerQueuing) {
        EXPECT_LE(std::abs(ap - r.weights.beta * s.R) / ap, 0.05) << to_string(mode);
      }
      if (mode != CalibrationMode::kPowerPropagation) {
        EXPECT_LE(std::abs(ap - r.weights.gamma * s.Q) / ap, 0.05) << to_string(mode);
      }
    } catch (const NonConvergenceError& e) {
      // Reported rather than silently accepted.
      EXPECT_FALSE(e.report().converged) << to_string(mode);
    }
  }
}

TEST(Calibration, RejectsEmptyInput) {
  const Topology t = default_architecture(8, 1 * kGbps);
  EXPECT_THROW(calibrate_weights(t, std::vector<TaskSet>{}, PowerParams::defaults(),
                                 CalibrationMode::kAll),
               InvalidRangeError);
}

}  // namespace
}  // namespace vecopt
