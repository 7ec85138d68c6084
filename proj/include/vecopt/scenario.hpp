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

#ifndef VECOPT_SCENARIO_HPP
#define VECOPT_SCENARIO_HPP

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "vecopt/optimizer.hpp"
#include "vecopt/power.hpp"
#include "vecopt/topology.hpp"
#include "vecopt/units.hpp"
#include "vecopt/workload.hpp"

namespace vecopt {

// Uniform sweep: n_tasks identical tasks per point, demand stepped from
// demand_min to demand_max (MIPS).
struct SweepSpec {
  std::size_t n_tasks = 10;
  double demand_min_mips = 100.0;
  double demand_max_mips = 1000.0;
  double demand_step_mips = 100.0;
  double drr = 0.1;
};

// How joint-objective weights are calibrated along a sweep.
enum class CalibrationScope {
  kSweepMidpoint,  // one weight set per sweep, from the point at index (n-1)/2
  kPerPoint,
};

struct ScenarioConfig {
  int scenario = 1;
  std::vector<ObjectiveCase> cases;
  std::vector<BitRate> ap_wireless_rates;
  SweepSpec sweep;
  std::optional<std::filesystem::path> power_params_file;
  std::optional<std::filesystem::path> topology_file;
  std::optional<std::filesystem::path> tasks_file;  // replaces the sweep
  // Overrides the NF capacity of the parameter file. Scenario 1 places all
  // ten 700 MIPS tasks on the NF, which needs at least 7000 MIPS, while the
  // later scenarios exhaust the NF beyond 8 such tasks.
  std::optional<double> nf_capacity_mips;
  std::filesystem::path output_dir = "results";
  CalibrationScope calibration = CalibrationScope::kSweepMidpoint;
  CalibrationOptions calibration_options;

  // Cases, AP rates and NF capacity used for scenario `id` (1..4).
  static ScenarioConfig defaults(int id);
  void validate() const;
};

struct SweepRow {
  int scenario = 0;
  ObjectiveCase objective = ObjectiveCase::kPower;
  BitRate ap_wireless_rate = 0;
  double traffic_mbps = 0.0;
  bool feasible = false;
  std::string note;  // error text of an infeasible point
  double power_w = 0.0;
  double avg_propagation_us = 0.0;
  double avg_queuing_us = 0.0;
  std::array<double, 5> tier_traffic_mbps{};  // VN, NF, LF, MF, CC
  ObjectiveWeights weights;
  bool calibrated = false;  // joint case whose calibration converged
  std::vector<std::string> allocation;  // PN name per task
};

// Row describing a solved instance; the weights are those of `result`.
SweepRow row_from_result(int scenario, ObjectiveCase objective, const Topology& topology,
                         const TaskSet& tasks, const SolveResult& result, bool calibrated);

struct ScenarioOutput {
  std::vector<SweepRow> rows;
  std::vector<std::filesystem::path> files;
};

// Runs every (AP rate, case, sweep point) of the scenario. Rows are ordered
// by AP rate, then case, then sweep point. Throws ConfigError for a bad
// configuration; a point without a feasible allocation yields a row marked
// infeasible.
std::vector<SweepRow> run_sweep(const ScenarioConfig& config);

// run_sweep plus the scenario CSV, one CSV per figure and a gnuplot script
// per figure CSV, all under config.output_dir.
ScenarioOutput run_scenario(const ScenarioConfig& config);

std::string csv_text(const std::vector<SweepRow>& rows);
void emit_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& file);

// Environment variable naming the default output directory.
inline constexpr const char* kOutDirEnv = "VECOPT_OUT_DIR";
std::filesystem::path default_output_dir();

}  // namespace vecopt

#endif  // VECOPT_SCENARIO_HPP
