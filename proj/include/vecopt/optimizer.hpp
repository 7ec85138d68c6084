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

#ifndef VECOPT_OPTIMIZER_HPP
#define VECOPT_OPTIMIZER_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vecopt/delay.hpp"
#include "vecopt/error.hpp"
#include "vecopt/power.hpp"
#include "vecopt/topology.hpp"
#include "vecopt/workload.hpp"

namespace vecopt {

// Weights of alpha*P + beta*R + gamma*Q. P is in W and R, Q in seconds, so
// beta and gamma carry W/s and the objective is in W.
struct ObjectiveWeights {
  double alpha = 1.0;
  double beta = 0.0;
  double gamma = 0.0;

  void validate() const;
  ObjectiveWeights scaled(double factor) const {
    return {alpha * factor, beta * factor, gamma * factor};
  }
};

// The six objective functions studied in the evaluation.
enum class ObjectiveCase {
  kPower = 1,
  kPropagation = 2,
  kPowerPropagation = 3,
  kQueuing = 4,
  kPowerQueuing = 5,
  kAll = 6,
};

std::string_view to_string(ObjectiveCase c);
ObjectiveCase objective_case_from_string(std::string_view text);
bool is_joint(ObjectiveCase c);
// Weights of a single-term case; throws InvalidRangeError for joint cases.
ObjectiveWeights single_term_weights(ObjectiveCase c);

struct SolveResult {
  Allocation allocation;
  ObjectiveWeights weights;
  PowerBreakdown power;
  PathDelays delays;
  double P = 0.0;  // W
  double R = 0.0;  // s
  double Q = 0.0;  // s/packet
  double objective = 0.0;
  std::vector<BitRate> node_arrival_bps;   // lambda_i per node
  std::vector<double> node_queuing_s;      // Q_i per node
  std::vector<double> pn_mips;             // per node; zero off processors
  std::vector<BitRate> pn_traffic_bps;     // per node; zero off processors
  std::size_t explored = 0;                // candidates or search nodes

  // Traffic allocated to each tier, in Mb/s.
  double tier_traffic_mbps(const Topology& topology, PnTier tier) const;
  std::size_t tier_tasks(const Topology& topology, PnTier tier) const;
};

// Throws InfeasibleError when the allocation violates a capacity, ingress or
// stability constraint.
SolveResult evaluate(const Topology& topology, const TaskSet& tasks,
                     const Allocation& allocation, const PowerParams& params,
                     const ObjectiveWeights& weights);
SolveResult evaluate(const Topology& topology, const TaskSet& tasks,
                     const Allocation& allocation, const PowerParams& params,
                     const ObjectiveWeights& weights, const DelayTables& tables);

// Relative tolerance under which two objective values count as tied. Ties go
// to the lexicographically smallest allocation in PN order.
inline constexpr double kTieTolerance = 1e-12;

// True when allocation a precedes b in PN-rank lexicographic order.
bool lex_less(const Topology& topology, const Allocation& a, const Allocation& b);

// Reference solver: enumerates every allocation up to vehicle relabelling and
// permutation of identical tasks. Throws NoFeasibleAllocationError.
SolveResult solve_exhaustive(const Topology& topology, const TaskSet& tasks,
                             const PowerParams& params, const ObjectiveWeights& weights);

// Depth-first branch and bound over task -> PN decisions. Returns the same
// allocation as solve_exhaustive. Throws NoFeasibleAllocationError.
SolveResult solve_bnb(const Topology& topology, const TaskSet& tasks,
                      const PowerParams& params, const ObjectiveWeights& weights);

enum class CalibrationMode { kPowerPropagation, kPowerQueuing, kAll };

std::string_view to_string(CalibrationMode mode);
CalibrationMode calibration_mode_for(ObjectiveCase c);

struct ObjectiveTotals {
  double P = 0.0;
  double R = 0.0;
  double Q = 0.0;
};

struct CalibrationOptions {
  double tolerance = 0.05;
  int max_iterations = 20;
};

struct CalibrationReport {
  ObjectiveWeights weights;
  bool converged = false;
  int iterations = 0;
  ObjectiveTotals at_optimum;  // totals of the last joint solve

  // |alpha P - beta R| / alpha P and |alpha P - gamma Q| / alpha P.
  double propagation_imbalance() const;
  double queuing_imbalance() const;
};

class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& what, CalibrationReport report)
      : Error(what), report_(std::move(report)) {}
  const CalibrationReport& report() const { return report_; }

 private:
  CalibrationReport report_;
};

// Solves the problem for the given weights and returns P, R and Q of the
// optimum (summed over whatever set of instances the caller calibrates on).
using JointSolver = std::function<ObjectiveTotals(const ObjectiveWeights&)>;

// Equal-importance weight calibration: solve power-only and delay-only, set
// beta = P/R (gamma = P/Q), then re-solve jointly and rescale
// beta <- beta * alpha P / (beta R) until the weighted terms agree within
// tolerance. Throws NonConvergenceError carrying the last weights.
CalibrationReport calibrate_weights(const JointSolver& solve, CalibrationMode mode,
                                    const CalibrationOptions& options = {});

// Calibration on the sum of P, R, Q over `points`, solved with solve_bnb.
CalibrationReport calibrate_weights(const Topology& topology,
                                    std::span<const TaskSet> points,
                                    const PowerParams& params, CalibrationMode mode,
                                    const CalibrationOptions& options = {});

}  // namespace vecopt

#endif  // VECOPT_OPTIMIZER_HPP
