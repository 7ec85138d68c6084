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

#ifndef VECOPT_MILP_HPP
#define VECOPT_MILP_HPP

#include <cstddef>
#include <filesystem>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "vecopt/delay.hpp"
#include "vecopt/optimizer.hpp"
#include "vecopt/power.hpp"
#include "vecopt/topology.hpp"
#include "vecopt/workload.hpp"

namespace vecopt {

enum class VarKind { kContinuous, kBinary };
enum class Sense { kLessEqual, kGreaterEqual, kEqual };

struct Variable {
  std::string name;
  VarKind kind = VarKind::kContinuous;
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();
};

struct Term {
  std::size_t var = 0;
  double coef = 0.0;
};

struct Constraint {
  std::string name;
  std::vector<Term> terms;
  Sense sense = Sense::kLessEqual;
  double rhs = 0.0;
};

// Solver-agnostic linear model with a minimization objective.
class MilpModel {
 public:
  // Binary bounds are clipped to [0, 1]. Throws InvalidRangeError on a
  // duplicate name or an empty bound interval.
  std::size_t add_variable(std::string name, VarKind kind, double lower = 0.0,
                           double upper = std::numeric_limits<double>::infinity());
  // Throws InvalidRangeError on a duplicate name or an undeclared variable.
  std::size_t add_constraint(std::string name, std::vector<Term> terms, Sense sense,
                             double rhs);
  void set_objective(std::vector<Term> terms);

  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const std::vector<Term>& objective() const { return objective_; }

  std::optional<std::size_t> find_variable(std::string_view name) const;
  std::optional<std::size_t> find_constraint(std::string_view name) const;
  std::size_t variable(std::string_view name) const;  // throws InvalidRangeError
  std::size_t count(VarKind kind) const;

 private:
  std::vector<Variable> variables_;
  std::vector<Constraint> constraints_;
  std::vector<Term> objective_;
  std::unordered_map<std::string, std::size_t> var_index_;
  std::unordered_map<std::string, std::size_t> row_index_;
};

// Big-M constants. g1 bounds any link flow (Mb/s); g2 bounds any per-node
// queuing delay (ms).
struct BigM {
  double g1_mbps = 1e4;
  double g2_ms = 1e3;

  // Twice the total traffic and twice the largest stable grid delay.
  static BigM tight(const TaskSet& tasks, const DelayTables& tables);
};

// Variable naming (s = task index, d = PN node id, i/j = node ids; rates in
// Mb/s, delays in microseconds):
//   x_s{s}_d{d}            task s runs on PN d
//   lam_s{s}_d{d}_i{i}_j{j}, zeta_s{s}_d{d}_i{i}_j{j}
//                          flow of task s towards d on arc i->j and its
//                          routing binary
//   qa_s{s}_d{d}_i{i}_j{j} queuing delay at j charged to that flow
//   lam_i{i}, q_i{i}, u_i{i}, sigma_i{i}_a{a}
//                          arrival rate, delay, activity and arrival-rate
//                          indicator of node i (a indexes achievable rates)
//   y_d{d}                 PN d is switched on
//   r_s{s}_d{d}, q_s{s}_d{d}, P, R, Q
// The objective alpha P + beta R + gamma Q is stated in W with R and Q
// scaled back to seconds.
MilpModel build_milp(const Topology& topology, const TaskSet& tasks,
                     const PowerParams& params, const ObjectiveWeights& weights,
                     const DelayTables& tables, const BigM& big_m = {});

// CPLEX LP text. Output is deterministic for a given model.
void write_lp(const MilpModel& model, std::ostream& out);
std::string lp_text(const MilpModel& model);
void write_lp_file(const MilpModel& model, const std::filesystem::path& file);

// Values of every model variable for a given allocation. Routing, flows and
// indicators are set from the allocation; delays, totals and power are then
// read off the model's own defining rows.
std::vector<double> milp_point(const MilpModel& model, const Topology& topology,
                               const TaskSet& tasks, const Allocation& allocation);

double objective_value(const MilpModel& model, const std::vector<double>& values);

// Names of violated rows, bounds and integrality requirements.
std::vector<std::string> check_point(const MilpModel& model,
                                     const std::vector<double>& values,
                                     double tolerance = 1e-9);

}  // namespace vecopt

#endif  // VECOPT_MILP_HPP
