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

// Command-line front end: scenario sweeps, single solves, MILP export and
// table/parameter dumps.

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "vecopt/config.hpp"
#include "vecopt/delay.hpp"
#include "vecopt/error.hpp"
#include "vecopt/milp.hpp"
#include "vecopt/optimizer.hpp"
#include "vecopt/scenario.hpp"

namespace {

using namespace vecopt;

// Inputs shared by the single-instance subcommands.
struct Instance {
  double traffic_mbps = 500.0;
  std::size_t n_tasks = 10;
  double drr = 0.1;
  double ap_rate_bps = 1e9;
  std::optional<double> nf_capacity;
  std::string tasks_file;
  std::string topology_file;
  std::string params_file;

  void add_options(CLI::App* app) {
    app->add_option("--traffic", traffic_mbps, "Total traffic in Mb/s (identical tasks)")
        ->check(CLI::PositiveNumber);
    app->add_option("--n-tasks", n_tasks, "Number of identical tasks")->check(CLI::PositiveNumber);
    app->add_option("--drr", drr, "Data rate ratio (Mb/s per MIPS)")->check(CLI::PositiveNumber);
    app->add_option("--ap-rate", ap_rate_bps, "AP wireless service rate in b/s")
        ->check(CLI::PositiveNumber);
    app->add_option("--nf-capacity", nf_capacity, "Override the NF capacity (MIPS)")
        ->check(CLI::PositiveNumber);
    app->add_option("--tasks", tasks_file, "Task set file (JSON); replaces --traffic");
    app->add_option("--topology", topology_file, "Topology file (JSON)");
    app->add_option("--power-params", params_file, "Power parameter file (JSON)");
  }

  PowerParams params() const {
    PowerParams p = params_file.empty() ? PowerParams::defaults() : load_power_params(params_file);
    if (nf_capacity) p.processors.at(PnTier::kNf).capacity_mips = *nf_capacity;
    p.validate();
    return p;
  }

  Topology topology() const {
    const Topology base = topology_file.empty() ? default_architecture(ArchitectureOptions{})
                                                : load_topology(topology_file);
    return base.with_ap_wireless_rate(to_bit_rate(ap_rate_bps));
  }

  TaskSet tasks(const Topology& topology) const {
    if (!tasks_file.empty()) return load_task_set(tasks_file, topology);
    const double demand = traffic_mbps / (static_cast<double>(n_tasks) * drr);
    const std::vector<double> demands(n_tasks, demand);
    return make_task_set(demands, drr, topology.source_nodes());
  }
};

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    double v = 0.0;
    const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
    if (res.ec != std::errc() || res.ptr != item.data() + item.size()) {
      throw ConfigError("not a number: '" + item + "'");
    }
    out.push_back(v);
  }
  return out;
}

struct ResolvedWeights {
  ObjectiveWeights weights;
  bool calibrated = false;  // calibration ran and converged
};

ResolvedWeights resolve_weights(const std::string& objective, const std::string& weights,
                                const Topology& topology, const TaskSet& tasks,
                                const PowerParams& params) {
  if (!weights.empty()) {
    const std::vector<double> w = parse_list(weights);
    if (w.size() != 3) throw ConfigError("--weights needs alpha,beta,gamma");
    return {{w[0], w[1], w[2]}, false};
  }
  const ObjectiveCase c = objective_case_from_string(objective);
  if (!is_joint(c)) return {single_term_weights(c), false};
  try {
    return {calibrate_weights(topology, std::span(&tasks, 1), params, calibration_mode_for(c))
                .weights,
            true};
  } catch (const NonConvergenceError& e) {
    std::cerr << "warning: " << e.what() << "; using the last weights\n";
    return {e.report().weights, false};
  }
}

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

int run(int argc, char** argv) {
  CLI::App app{"Power and delay aware task allocation for cloud-fog-vehicular networks"};
  app.require_subcommand(1);

  // run
  auto* run_cmd = app.add_subcommand("run", "Run an evaluation scenario sweep");
  int scenario = 1;
  std::string ap_rates, cases, out_dir, r_params, r_topology, r_tasks;
  bool per_point = false;
  std::optional<double> run_nf_capacity;
  run_cmd->add_option("--scenario", scenario, "Scenario 1-4")->required();
  run_cmd->add_option("--ap-rates", ap_rates, "Comma-separated AP wireless rates in b/s");
  run_cmd->add_option("--cases", cases,
                      "Comma-separated objectives (power,prop,queue,power+prop,power+queue,all)");
  run_cmd->add_option("--out", out_dir,
                      std::string("Output directory (default $") + kOutDirEnv + " or results)");
  run_cmd->add_option("--power-params", r_params, "Power parameter file (JSON)");
  run_cmd->add_option("--topology", r_topology, "Topology file (JSON)");
  run_cmd->add_option("--tasks", r_tasks, "Task set file (JSON); replaces the sweep");
  run_cmd->add_option("--nf-capacity", run_nf_capacity,
                      "Override the NF capacity (MIPS) for this scenario")
      ->check(CLI::PositiveNumber);
  run_cmd->add_flag("--per-point-calibration", per_point,
                    "Calibrate joint weights at every sweep point");

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "Solve one instance");
  Instance solve_in;
  std::string objective = "power", weights, solver = "bnb";
  bool as_json = false;
  bool as_csv = false;
  solve_in.add_options(solve_cmd);
  solve_cmd->add_option("--objective", objective, "power|prop|queue|power+prop|power+queue|all");
  solve_cmd->add_option("--weights", weights, "Explicit alpha,beta,gamma (W, W/s, W/s)");
  solve_cmd->add_option("--solver", solver, "bnb|exhaustive")
      ->check(CLI::IsMember({"bnb", "exhaustive"}));
  solve_cmd->add_flag("--json", as_json, "Print the result as JSON");
  solve_cmd->add_flag("--csv", as_csv, "Print the result as a CSV header and row")
      ->excludes("--json");

  // export-milp
  auto* milp_cmd = app.add_subcommand("export-milp", "Write the MILP in LP format");
  Instance milp_in;
  std::string milp_out, milp_objective = "power", milp_weights;
  bool tight = false;
  std::optional<double> g1, g2;
  milp_in.add_options(milp_cmd);
  milp_cmd->add_option("--out", milp_out, "Destination .lp file")->required();
  milp_cmd->add_option("--objective", milp_objective, "Objective case");
  milp_cmd->add_option("--weights", milp_weights, "Explicit alpha,beta,gamma");
  milp_cmd->add_flag("--tight-big-m", tight, "Use 2x total traffic and 2x the largest delay");
  milp_cmd->add_option("--g1", g1, "Big-M for flows (Mb/s)")->check(CLI::PositiveNumber);
  milp_cmd->add_option("--g2", g2, "Big-M for delays (ms)")->check(CLI::PositiveNumber);

  // dump-lookup
  auto* lookup_cmd = app.add_subcommand("dump-lookup", "Print a queuing delay lookup table");
  Instance lookup_in;
  double service_rate = 1e9;
  lookup_in.add_options(lookup_cmd);
  lookup_cmd->add_option("--service-rate", service_rate, "Service rate in b/s")
      ->check(CLI::PositiveNumber);

  // dump-power-params
  auto* params_cmd = app.add_subcommand("dump-power-params", "Print the power parameters");
  std::string dump_params_file;
  params_cmd->add_option("--power-params", dump_params_file, "Parameter file to normalize");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  if (*run_cmd) {
    ScenarioConfig config = ScenarioConfig::defaults(scenario);
    if (!ap_rates.empty()) {
      config.ap_wireless_rates.clear();
      for (double r : parse_list(ap_rates)) config.ap_wireless_rates.push_back(to_bit_rate(r));
    }
    if (!cases.empty()) {
      config.cases.clear();
      std::stringstream in(cases);
      std::string item;
      while (std::getline(in, item, ',')) config.cases.push_back(objective_case_from_string(item));
    }
    if (!out_dir.empty()) config.output_dir = out_dir;
    if (!r_params.empty()) config.power_params_file = r_params;
    if (!r_topology.empty()) config.topology_file = r_topology;
    if (!r_tasks.empty()) config.tasks_file = r_tasks;
    if (run_nf_capacity) config.nf_capacity_mips = *run_nf_capacity;
    if (per_point) config.calibration = CalibrationScope::kPerPoint;
    const ScenarioOutput out = run_scenario(config);
    std::size_t infeasible = 0;
    for (const SweepRow& r : out.rows) infeasible += r.feasible ? 0 : 1;
    std::cout << "scenario " << scenario << ": " << out.rows.size() << " rows ("
              << infeasible << " infeasible)\n";
    for (const auto& f : out.files) std::cout << "  " << f.string() << "\n";
    return 0;
  }

  if (*solve_cmd) {
    const PowerParams params = solve_in.params();
    const Topology topology = solve_in.topology();
    const TaskSet tasks = solve_in.tasks(topology);
    const ResolvedWeights resolved =
        resolve_weights(objective, weights, topology, tasks, params);
    const ObjectiveWeights& w = resolved.weights;
    const SolveResult r = solver == "bnb" ? solve_bnb(topology, tasks, params, w)
                                          : solve_exhaustive(topology, tasks, params, w);
    if (as_csv) {
      std::cout << csv_text({row_from_result(0, objective_case_from_string(objective), topology,
                                             tasks, r, resolved.calibrated)});
    } else if (as_json) {
      nlohmann::ordered_json j;
      j["weights"] = {w.alpha, w.beta, w.gamma};
      j["objective"] = r.objective;
      j["power_w"] = r.P;
      j["total_propagation_s"] = r.R;
      j["total_queuing_s"] = r.Q;
      j["avg_propagation_us"] = r.delays.average_propagation_s() * 1e6;
      j["avg_queuing_us"] = r.delays.average_queuing_s() * 1e6;
      nlohmann::ordered_json alloc = nlohmann::json::array();
      for (NodeId pn : r.allocation) alloc.push_back(topology.node(pn).name);
      j["allocation"] = alloc;
      j["explored"] = r.explored;
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << "weights    " << shortest(w.alpha) << ", " << shortest(w.beta) << ", "
                << shortest(w.gamma) << "\n"
                << "objective  " << shortest(r.objective) << "\n"
                << "power      " << r.P << " W\n"
                << "avg R      " << r.delays.average_propagation_s() * 1e6 << " us\n"
                << "avg Q      " << r.delays.average_queuing_s() * 1e6 << " us\n"
                << "allocation";
      for (NodeId pn : r.allocation) std::cout << ' ' << topology.node(pn).name;
      std::cout << "\n";
    }
    return 0;
  }

  if (*milp_cmd) {
    const PowerParams params = milp_in.params();
    const Topology topology = milp_in.topology();
    const TaskSet tasks = milp_in.tasks(topology);
    const ObjectiveWeights w =
        resolve_weights(milp_objective, milp_weights, topology, tasks, params).weights;
    const DelayTables tables = build_lookup_tables(topology, tasks);
    BigM big_m = tight ? BigM::tight(tasks, tables) : BigM{};
    if (g1) big_m.g1_mbps = *g1;
    if (g2) big_m.g2_ms = *g2;
    const MilpModel model = build_milp(topology, tasks, params, w, tables, big_m);
    write_lp_file(model, milp_out);
    std::cout << milp_out << ": " << model.variables().size() << " variables ("
              << model.count(VarKind::kBinary) << " binary), " << model.constraints().size()
              << " constraints\n";
    return 0;
  }

  if (*lookup_cmd) {
    const Topology topology = lookup_in.topology();
    const TaskSet tasks = lookup_in.tasks(topology);
    const DelayLookupTable table =
        build_lookup_table(tasks, to_bit_rate(service_rate), topology.packet_bits());
    std::cout << "service_rate_bps,arrival_rate_bps,delay_seconds\n";
    for (const auto& [arrival, delay] : table.entries()) {
      std::cout << table.service_rate_bps() << ',' << arrival << ','
                << (delay ? shortest(*delay) : std::string("infeasible")) << "\n";
    }
    return 0;
  }

  if (*params_cmd) {
    const PowerParams p =
        dump_params_file.empty() ? PowerParams::defaults() : load_power_params(dump_params_file);
    std::cout << power_params_to_json_text(p);
    return 0;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const vecopt::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const vecopt::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
