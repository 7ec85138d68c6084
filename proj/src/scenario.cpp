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

#include "vecopt/scenario.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <future>
#include <map>
#include <sstream>

#include "vecopt/config.hpp"
#include "vecopt/error.hpp"

namespace vecopt {

namespace {

constexpr double kScenario1NfCapacityMips = 7000.0;

}  // namespace

ScenarioConfig ScenarioConfig::defaults(int id) {
  ScenarioConfig c;
  c.scenario = id;
  c.ap_wireless_rates = {1 * kGbps};
  switch (id) {
    case 1:
      c.cases = {ObjectiveCase::kPower, ObjectiveCase::kPropagation,
                 ObjectiveCase::kPowerPropagation};
      c.nf_capacity_mips = kScenario1NfCapacityMips;
      break;
    case 2:
      c.cases = {ObjectiveCase::kPower, ObjectiveCase::kQueuing, ObjectiveCase::kPowerQueuing};
      break;
    case 3:
      c.cases = {ObjectiveCase::kQueuing, ObjectiveCase::kPowerQueuing};
      c.ap_wireless_rates = {1 * kGbps, 5 * kGbps, 10 * kGbps};
      break;
    case 4:
      c.cases = {ObjectiveCase::kPowerPropagation, ObjectiveCase::kPowerQueuing,
                 ObjectiveCase::kAll};
      break;
    default:
      throw ConfigError("scenario must be 1, 2, 3 or 4 (got " + std::to_string(id) + ")");
  }
  c.output_dir = default_output_dir();
  return c;
}

void ScenarioConfig::validate() const {
  if (scenario < 1 || scenario > 4) {
    throw ConfigError("scenario must be 1, 2, 3 or 4 (got " + std::to_string(scenario) + ")");
  }
  if (cases.empty()) throw ConfigError("no objective cases selected");
  if (ap_wireless_rates.empty()) throw ConfigError("no AP wireless rates selected");
  for (BitRate r : ap_wireless_rates) {
    if (r <= 0) throw ConfigError("AP wireless rate must be positive");
  }
  if (!tasks_file) {
    if (sweep.n_tasks == 0) throw ConfigError("sweep needs at least one task");
    if (!(sweep.demand_min_mips > 0.0) || !(sweep.demand_step_mips > 0.0) ||
        !(sweep.demand_max_mips >= sweep.demand_min_mips)) {
      throw ConfigError("sweep demands must satisfy 0 < min <= max and step > 0");
    }
    if (!(sweep.drr > 0.0)) throw ConfigError("data rate ratio must be positive");
  }
  if (nf_capacity_mips && !(*nf_capacity_mips > 0.0)) {
    throw ConfigError("NF capacity must be positive");
  }
  if (!(calibration_options.tolerance > 0.0) || calibration_options.max_iterations < 1) {
    throw ConfigError("calibration needs a positive tolerance and iteration limit");
  }
}

std::filesystem::path default_output_dir() {
  if (const char* env = std::getenv(kOutDirEnv); env && *env) return env;
  return "results";
}

namespace {

constexpr std::array<PnTier, 5> kTiers{PnTier::kVn, PnTier::kNf, PnTier::kLf, PnTier::kMf,
                                       PnTier::kCc};

std::string fixed(double v, int digits = 6) {
  if (std::isnan(v)) return "NaN";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, digits);
  return std::string(buf, res.ptr);
}

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string gbps_label(BitRate r) { return shortest(static_cast<double>(r) / 1e9); }

struct Inputs {
  PowerParams params;
  Topology base;
  std::vector<TaskSet> points;
};

Inputs load_inputs(const ScenarioConfig& config) {
  PowerParams params = config.power_params_file ? load_power_params(*config.power_params_file)
                                                : PowerParams::defaults();
  if (config.nf_capacity_mips) {
    auto it = params.processors.find(PnTier::kNf);
    if (it == params.processors.end()) throw ConfigError("parameters define no NF processor");
    it->second.capacity_mips = *config.nf_capacity_mips;
  }
  params.validate();
  Topology base = config.topology_file ? load_topology(*config.topology_file)
                                       : default_architecture(ArchitectureOptions{});
  std::vector<TaskSet> points;
  if (config.tasks_file) {
    points.push_back(load_task_set(*config.tasks_file, base));
  } else {
    try {
      points = uniform_sweep(config.sweep.n_tasks, config.sweep.demand_min_mips,
                             config.sweep.demand_max_mips, config.sweep.demand_step_mips,
                             config.sweep.drr, base.source_nodes());
    } catch (const InvalidRangeError& e) {
      throw ConfigError(e.what());
    }
  }
  return {std::move(params), std::move(base), std::move(points)};
}

SweepRow infeasible_row(const ScenarioConfig& config, const Topology& topology,
                        const TaskSet& tasks, ObjectiveCase c, std::string note) {
  SweepRow row;
  row.scenario = config.scenario;
  row.objective = c;
  row.ap_wireless_rate = topology.node(topology.ap_wireless()).service_rate_bps;
  row.traffic_mbps = to_mbps(tasks.total_traffic_bps());
  row.note = std::move(note);
  return row;
}

SweepRow solve_point(const ScenarioConfig& config, const Topology& topology,
                     const TaskSet& tasks, const PowerParams& params, ObjectiveCase c,
                     const ObjectiveWeights& weights, bool calibrated) {
  try {
    return row_from_result(config.scenario, c, topology, tasks,
                           solve_bnb(topology, tasks, params, weights), calibrated);
  } catch (const NoFeasibleAllocationError& e) {
    SweepRow row = infeasible_row(config, topology, tasks, c, e.what());
    row.weights = weights;
    row.calibrated = calibrated;
    return row;
  }
}

struct Calibrated {
  std::optional<ObjectiveWeights> weights;
  bool converged = false;
  std::string failure;
};

Calibrated calibrate(const ScenarioConfig& config, const Topology& topology,
                     std::span<const TaskSet> points, const PowerParams& params,
                     ObjectiveCase c) {
  Calibrated out;
  try {
    const CalibrationReport report = calibrate_weights(
        topology, points, params, calibration_mode_for(c), config.calibration_options);
    out.weights = report.weights;
    out.converged = true;
  } catch (const NonConvergenceError& e) {
    out.weights = e.report().weights;
  } catch (const NoFeasibleAllocationError& e) {
    out.failure = std::string("calibration: ") + e.what();
  }
  return out;
}

// All rows of one (AP rate, case) series, in sweep order.
std::vector<SweepRow> run_series(const ScenarioConfig& config, const Topology& topology,
                                 const std::vector<TaskSet>& points, const PowerParams& params,
                                 ObjectiveCase c) {
  std::optional<Calibrated> shared;
  if (is_joint(c) && config.calibration == CalibrationScope::kSweepMidpoint) {
    const std::size_t mid = (points.size() - 1) / 2;
    shared = calibrate(config, topology, std::span(points).subspan(mid, 1), params, c);
  }
  std::vector<std::future<SweepRow>> futures;
  for (const TaskSet& tasks : points) {
    futures.push_back(std::async(std::launch::async, [&, c]() -> SweepRow {
      if (!is_joint(c)) {
        return solve_point(config, topology, tasks, params, c, single_term_weights(c), false);
      }
      const Calibrated cal =
          shared ? *shared : calibrate(config, topology, std::span(&tasks, 1), params, c);
      if (!cal.weights) return infeasible_row(config, topology, tasks, c, cal.failure);
      return solve_point(config, topology, tasks, params, c, *cal.weights, cal.converged);
    }));
  }
  std::vector<SweepRow> rows;
  for (auto& f : futures) rows.push_back(f.get());
  return rows;
}

}  // namespace

SweepRow row_from_result(int scenario, ObjectiveCase objective, const Topology& topology,
                         const TaskSet& tasks, const SolveResult& result, bool calibrated) {
  SweepRow row;
  row.scenario = scenario;
  row.objective = objective;
  row.ap_wireless_rate = topology.node(topology.ap_wireless()).service_rate_bps;
  row.traffic_mbps = to_mbps(tasks.total_traffic_bps());
  row.weights = result.weights;
  row.calibrated = calibrated;
  row.feasible = true;
  row.power_w = result.P;
  row.avg_propagation_us = result.delays.average_propagation_s() * 1e6;
  row.avg_queuing_us = result.delays.average_queuing_s() * 1e6;
  for (std::size_t k = 0; k < kTiers.size(); ++k) {
    row.tier_traffic_mbps[k] = result.tier_traffic_mbps(topology, kTiers[k]);
  }
  for (NodeId pn : result.allocation) row.allocation.push_back(topology.node(pn).name);
  return row;
}

std::vector<SweepRow> run_sweep(const ScenarioConfig& config) {
  config.validate();
  const Inputs in = load_inputs(config);
  std::vector<Topology> topologies;
  for (BitRate ap : config.ap_wireless_rates) {
    topologies.push_back(in.base.with_ap_wireless_rate(ap));
  }
  std::vector<std::future<std::vector<SweepRow>>> series;
  for (const Topology& topology : topologies) {
    for (ObjectiveCase c : config.cases) {
      series.push_back(std::async(std::launch::async, [&, c] {
        return run_series(config, topology, in.points, in.params, c);
      }));
    }
  }
  std::vector<SweepRow> rows;
  for (auto& f : series) {
    std::vector<SweepRow> part = f.get();
    rows.insert(rows.end(), part.begin(), part.end());
  }
  return rows;
}

std::string csv_text(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "scenario,case,ap_rate_gbps,traffic_mbps,status,power_w,avg_propagation_us,"
         "avg_queuing_us,vn_mbps,nf_mbps,lf_mbps,mf_mbps,cc_mbps,alpha,beta,gamma,"
         "calibration,allocation\n";
  for (const SweepRow& r : rows) {
    const double nan = std::nan("");
    out << r.scenario << ',' << to_string(r.objective) << ',' << gbps_label(r.ap_wireless_rate)
        << ',' << fixed(r.traffic_mbps, 3) << ',' << (r.feasible ? "ok" : "infeasible") << ','
        << fixed(r.feasible ? r.power_w : nan) << ','
        << fixed(r.feasible ? r.avg_propagation_us : nan) << ','
        << fixed(r.feasible ? r.avg_queuing_us : nan);
    for (double t : r.tier_traffic_mbps) out << ',' << fixed(r.feasible ? t : nan, 3);
    out << ',' << shortest(r.weights.alpha) << ',' << shortest(r.weights.beta) << ','
        << shortest(r.weights.gamma) << ','
        << (!is_joint(r.objective) ? "none" : r.calibrated ? "converged" : "not_converged")
        << ',';
    for (std::size_t k = 0; k < r.allocation.size(); ++k) {
      out << (k ? " " : "") << r.allocation[k];
    }
    out << '\n';
  }
  return out.str();
}

void emit_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& file) {
  write_text_file(file, csv_text(rows));
}

namespace {

enum class Metric { kPower, kPropagation, kQueuing, kAllocation };

struct Figure {
  int number;
  Metric metric;
  // Series are objective cases, or AP rates when `by_ap` is set, in which
  // case only rows of `fixed_case` are drawn.
  bool by_ap = false;
  ObjectiveCase fixed_case = ObjectiveCase::kPower;
};

std::vector<Figure> figures_for(int scenario) {
  using M = Metric;
  switch (scenario) {
    case 1: return {{3, M::kPower}, {4, M::kPropagation}, {5, M::kAllocation}};
    case 2: return {{6, M::kPower}, {7, M::kQueuing}, {8, M::kAllocation}};
    case 3:
      return {{9, M::kPower, true, ObjectiveCase::kQueuing},
              {10, M::kQueuing, true, ObjectiveCase::kQueuing},
              {11, M::kAllocation, true, ObjectiveCase::kQueuing},
              {12, M::kPower, true, ObjectiveCase::kPowerQueuing},
              {13, M::kQueuing, true, ObjectiveCase::kPowerQueuing},
              {14, M::kAllocation, true, ObjectiveCase::kPowerQueuing}};
    case 4:
      return {{15, M::kPower}, {16, M::kPropagation}, {17, M::kQueuing},
              {18, M::kAllocation}};
    default: return {};
  }
}

std::string_view metric_stem(Metric m) {
  switch (m) {
    case Metric::kPower: return "power";
    case Metric::kPropagation: return "propagation";
    case Metric::kQueuing: return "queuing";
    case Metric::kAllocation: return "allocation";
  }
  return "";
}

std::string_view metric_label(Metric m) {
  switch (m) {
    case Metric::kPower: return "Total power consumption (W)";
    case Metric::kPropagation: return "Average propagation delay (us)";
    case Metric::kQueuing: return "Average queuing delay (us)";
    case Metric::kAllocation: return "Allocated traffic (Mb/s)";
  }
  return "";
}

struct Series {
  std::string label;
  std::vector<const SweepRow*> rows;  // sweep order
};

std::vector<Series> series_of(const Figure& fig, const ScenarioConfig& config,
                              const std::vector<SweepRow>& rows) {
  std::vector<Series> out;
  if (fig.by_ap) {
    for (BitRate ap : config.ap_wireless_rates) {
      Series s{std::string(to_string(fig.fixed_case)) + "@" + gbps_label(ap) + "Gbps", {}};
      for (const SweepRow& r : rows) {
        if (r.objective == fig.fixed_case && r.ap_wireless_rate == ap) s.rows.push_back(&r);
      }
      if (!s.rows.empty()) out.push_back(std::move(s));
    }
  } else {
    for (BitRate ap : config.ap_wireless_rates) {
      for (ObjectiveCase c : config.cases) {
        std::string label(to_string(c));
        if (config.ap_wireless_rates.size() > 1) label += "@" + gbps_label(ap) + "Gbps";
        Series s{label, {}};
        for (const SweepRow& r : rows) {
          if (r.objective == c && r.ap_wireless_rate == ap) s.rows.push_back(&r);
        }
        if (!s.rows.empty()) out.push_back(std::move(s));
      }
    }
  }
  return out;
}

std::string figure_csv(const Figure& fig, const std::vector<Series>& series) {
  std::ostringstream out;
  out << "traffic_mbps";
  for (const Series& s : series) {
    if (fig.metric == Metric::kAllocation) {
      for (PnTier t : kTiers) out << ',' << s.label << ':' << to_string(t);
    } else {
      out << ',' << s.label;
    }
  }
  out << '\n';
  const std::size_t n = series.front().rows.size();
  for (std::size_t k = 0; k < n; ++k) {
    out << fixed(series.front().rows[k]->traffic_mbps, 3);
    for (const Series& s : series) {
      const SweepRow& r = *s.rows[k];
      const double nan = std::nan("");
      switch (fig.metric) {
        case Metric::kPower: out << ',' << fixed(r.feasible ? r.power_w : nan); break;
        case Metric::kPropagation:
          out << ',' << fixed(r.feasible ? r.avg_propagation_us : nan);
          break;
        case Metric::kQueuing: out << ',' << fixed(r.feasible ? r.avg_queuing_us : nan); break;
        case Metric::kAllocation:
          for (double t : r.tier_traffic_mbps) out << ',' << fixed(r.feasible ? t : nan, 3);
          break;
      }
    }
    out << '\n';
  }
  return out.str();
}

std::string plot_script(const Figure& fig, const std::string& stem, std::size_t columns) {
  std::ostringstream out;
  out << "# gnuplot script for " << stem << ".csv\n"
      << "set datafile separator ','\n"
      << "set datafile missing 'NaN'\n"
      << "set terminal pngcairo size 900,560\n"
      << "set output '" << stem << ".png'\n"
      << "set key outside right\n"
      << "set grid\n"
      << "set xlabel 'Total traffic (Mb/s)'\n"
      << "set ylabel '" << metric_label(fig.metric) << "'\n";
  if (fig.metric == Metric::kPropagation) out << "set logscale y\n";
  out << "plot for [k=2:" << columns << "] '" << stem
      << ".csv' using 1:k with linespoints title columnheader(k)\n";
  return out.str();
}

}  // namespace

ScenarioOutput run_scenario(const ScenarioConfig& config) {
  ScenarioOutput out;
  out.rows = run_sweep(config);
  std::error_code ec;
  std::filesystem::create_directories(config.output_dir, ec);
  if (ec) {
    throw IoError("cannot create " + config.output_dir.string() + ": " + ec.message());
  }
  const std::filesystem::path all =
      config.output_dir / ("scenario" + std::to_string(config.scenario) + ".csv");
  emit_csv(out.rows, all);
  out.files.push_back(all);

  for (const Figure& fig : figures_for(config.scenario)) {
    const std::vector<Series> series = series_of(fig, config, out.rows);
    if (series.empty()) continue;
    char num[8];
    std::snprintf(num, sizeof num, "%02d", fig.number);
    const std::string stem = "fig" + std::string(num) + "_" + std::string(metric_stem(fig.metric));
    const std::string csv = figure_csv(fig, series);
    const std::size_t columns =
        1 + series.size() * (fig.metric == Metric::kAllocation ? kTiers.size() : 1);
    write_text_file(config.output_dir / (stem + ".csv"), csv);
    write_text_file(config.output_dir / (stem + ".gp"), plot_script(fig, stem, columns));
    out.files.push_back(config.output_dir / (stem + ".csv"));
    out.files.push_back(config.output_dir / (stem + ".gp"));
  }
  return out;
}

}  // namespace vecopt
