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

#include "vecopt/milp.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "vecopt/error.hpp"

namespace vecopt {

std::size_t MilpModel::add_variable(std::string name, VarKind kind, double lower,
                                    double upper) {
  if (var_index_.contains(name)) throw InvalidRangeError("duplicate variable " + name);
  if (kind == VarKind::kBinary) {
    lower = std::max(lower, 0.0);
    upper = std::min(upper, 1.0);
  }
  if (!(lower <= upper)) throw InvalidRangeError("empty bounds for variable " + name);
  const std::size_t index = variables_.size();
  var_index_.emplace(name, index);
  variables_.push_back(Variable{std::move(name), kind, lower, upper});
  return index;
}

std::size_t MilpModel::add_constraint(std::string name, std::vector<Term> terms,
                                      Sense sense, double rhs) {
  if (row_index_.contains(name)) throw InvalidRangeError("duplicate constraint " + name);
  if (terms.empty()) throw InvalidRangeError("constraint " + name + " has no terms");
  for (const Term& t : terms) {
    if (t.var >= variables_.size()) {
      throw InvalidRangeError("constraint " + name + " uses an undeclared variable");
    }
  }
  const std::size_t index = constraints_.size();
  row_index_.emplace(name, index);
  constraints_.push_back(Constraint{std::move(name), std::move(terms), sense, rhs});
  return index;
}

void MilpModel::set_objective(std::vector<Term> terms) {
  for (const Term& t : terms) {
    if (t.var >= variables_.size()) {
      throw InvalidRangeError("objective uses an undeclared variable");
    }
  }
  objective_ = std::move(terms);
}

std::optional<std::size_t> MilpModel::find_variable(std::string_view name) const {
  auto it = var_index_.find(std::string(name));
  if (it == var_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> MilpModel::find_constraint(std::string_view name) const {
  auto it = row_index_.find(std::string(name));
  if (it == row_index_.end()) return std::nullopt;
  return it->second;
}

std::size_t MilpModel::variable(std::string_view name) const {
  if (auto v = find_variable(name)) return *v;
  throw InvalidRangeError("unknown variable " + std::string(name));
}

std::size_t MilpModel::count(VarKind kind) const {
  return static_cast<std::size_t>(std::count_if(
      variables_.begin(), variables_.end(), [kind](const Variable& v) { return v.kind == kind; }));
}

BigM BigM::tight(const TaskSet& tasks, const DelayTables& tables) {
  double max_delay_s = 0.0;
  for (const auto& [rate, table] : tables.tables()) {
    for (const auto& [arrival, delay] : table.entries()) {
      if (delay) max_delay_s = std::max(max_delay_s, *delay);
    }
  }
  BigM m;
  m.g1_mbps = 2.0 * to_mbps(tasks.total_traffic_bps());
  m.g2_ms = 2.0 * max_delay_s * 1e3;
  return m;
}

namespace {

struct Arc {
  NodeId tail;
  NodeId head;
  double distance_m = 0.0;
  Medium medium = Medium::kFibre;
};

double velocity(Medium medium) {
  return medium == Medium::kFreeSpace ? kSpeedOfLight : kSpeedOfLight * kFibreVelocityRatio;
}

std::string id(NodeId n) { return std::to_string(n.value); }

std::string flow_suffix(std::size_t s, NodeId d) {
  return "_s" + std::to_string(s) + "_d" + id(d);
}

std::string arc_suffix(std::size_t s, NodeId d, const Arc& a) {
  return flow_suffix(s, d) + "_i" + id(a.tail) + "_j" + id(a.head);
}

// Tree arcs oriented away from the AP interfaces.
std::vector<Arc> infrastructure_arcs(const Topology& topology) {
  std::vector<Arc> arcs;
  for (const Node& node : topology.nodes()) {
    const std::optional<NodeId> p = topology.parent(node.id);
    if (!p) continue;
    const Link* link = topology.link_between(*p, node.id);
    arcs.push_back(Arc{*p, node.id, link->distance_m, link->medium});
  }
  return arcs;
}

std::vector<Arc> source_arcs(const Topology& topology, NodeId source) {
  std::vector<Arc> arcs;
  for (NodeId ap : {topology.ap_wired(), topology.ap_wireless()}) {
    const Link* link = topology.link_between(source, ap);
    if (!link) {
      throw ConfigError("source '" + topology.node(source).name +
                        "' is not linked to both AP interfaces");
    }
    arcs.push_back(Arc{source, ap, link->distance_m, link->medium});
  }
  return arcs;
}

double mbps(BitRate r) { return to_mbps(r); }

void add_nonzero(std::vector<Term>& terms, std::size_t var, double coef) {
  if (coef != 0.0) terms.push_back(Term{var, coef});
}

}  // namespace

MilpModel build_milp(const Topology& topology, const TaskSet& tasks,
                     const PowerParams& params, const ObjectiveWeights& weights,
                     const DelayTables& tables, const BigM& big_m) {
  weights.validate();
  if (!(big_m.g1_mbps > 0.0) || !(big_m.g2_ms > 0.0)) {
    throw InvalidRangeError("big-M constants must be positive");
  }
  const double g1 = big_m.g1_mbps;
  const double g2 = big_m.g2_ms * 1e3;  // microseconds
  const std::vector<NodeId>& pns = topology.processing_nodes();
  const std::vector<BitRate> grid = achievable_arrivals(tasks);
  const std::vector<Arc> infra = infrastructure_arcs(topology);

  std::vector<NodeId> queues;
  for (const Node& node : topology.nodes()) {
    if (!has_queue(node)) continue;
    const DelayLookupTable& table = tables.for_rate(node.service_rate_bps);
    for (BitRate a : grid) {
      if (!table.contains(a)) {
        throw TableGapError("lookup table for " + std::to_string(node.service_rate_bps) +
                            " b/s lacks arrival rate " + std::to_string(a) + " b/s");
      }
    }
    queues.push_back(node.id);
  }

  MilpModel m;
  const auto kC = VarKind::kContinuous;
  const auto kB = VarKind::kBinary;

  // Assignment and PN activity.
  std::vector<std::vector<std::size_t>> x(tasks.size());
  for (std::size_t s = 0; s < tasks.size(); ++s) {
    for (NodeId d : pns) x[s].push_back(m.add_variable("x" + flow_suffix(s, d), kB));
  }
  std::vector<std::size_t> y;
  for (NodeId d : pns) y.push_back(m.add_variable("y_d" + id(d), kB));

  // Node arrival, delay and indicator variables.
  const std::size_t n_nodes = topology.nodes().size();
  std::vector<std::optional<std::size_t>> lam_i(n_nodes), q_i(n_nodes), u_i(n_nodes);
  for (NodeId i : queues) {
    lam_i[i.value] = m.add_variable("lam_i" + id(i), kC);
    q_i[i.value] = m.add_variable("q_i" + id(i), kC);
    u_i[i.value] = m.add_variable("u_i" + id(i), kB);
  }
  std::vector<std::vector<Term>> arrivals(n_nodes);

  std::vector<std::size_t> r_sd, q_sd;
  for (std::size_t s = 0; s < tasks.size(); ++s) {
    const Task& task = tasks[s];
    const double rate = mbps(task.data_rate_bps);
    std::vector<Arc> arcs = source_arcs(topology, task.source);
    arcs.insert(arcs.end(), infra.begin(), infra.end());

    {
      std::vector<Term> row;
      for (std::size_t k = 0; k < pns.size(); ++k) row.push_back({x[s][k], 1.0});
      m.add_constraint("assign_s" + std::to_string(s), std::move(row), Sense::kEqual, 1.0);
    }

    for (std::size_t k = 0; k < pns.size(); ++k) {
      const NodeId d = pns[k];
      const std::string fs = flow_suffix(s, d);
      const std::size_t xv = x[s][k];
      std::vector<std::size_t> lam(arcs.size()), zeta(arcs.size());
      std::vector<std::vector<Term>> balance(n_nodes);
      std::vector<Term> r_row, q_row;
      const std::size_t rv = m.add_variable("r" + fs, kC);
      const std::size_t qv = m.add_variable("q" + fs, kC);
      r_sd.push_back(rv);
      q_sd.push_back(qv);
      r_row.push_back({rv, 1.0});
      q_row.push_back({qv, 1.0});

      for (std::size_t a = 0; a < arcs.size(); ++a) {
        const Arc& arc = arcs[a];
        const std::string as = arc_suffix(s, d, arc);
        lam[a] = m.add_variable("lam" + as, kC);
        zeta[a] = m.add_variable("zeta" + as, kB);
        balance[arc.tail.value].push_back({lam[a], 1.0});
        balance[arc.head.value].push_back({lam[a], -1.0});

        // Routing binary follows the flow.
        m.add_constraint("act_lo" + as, {{lam[a], 1.0}, {zeta[a], -std::min(1.0, rate)}},
                         Sense::kGreaterEqual, 0.0);
        m.add_constraint("act_hi" + as, {{lam[a], 1.0}, {zeta[a], -g1}}, Sense::kLessEqual,
                         0.0);

        const Node& head = topology.node(arc.head);
        if (has_queue(head)) {
          arrivals[arc.head.value].push_back({lam[a], -1.0});
          // qa = q_head * zeta, linearized.
          const std::size_t qa = m.add_variable("qa" + as, kC);
          const std::size_t qj = *q_i[arc.head.value];
          m.add_constraint("lin1" + as, {{qa, 1.0}, {zeta[a], -g2}}, Sense::kLessEqual, 0.0);
          m.add_constraint("lin2" + as, {{qa, 1.0}, {qj, -1.0}}, Sense::kLessEqual, 0.0);
          m.add_constraint("lin3" + as, {{qa, 1.0}, {qj, -1.0}, {zeta[a], -g2}},
                           Sense::kGreaterEqual, -g2);
          q_row.push_back({qa, -1.0});
        }
        if (topology.node(arc.tail).kind != NodeKind::kSourceNode) {
          add_nonzero(r_row, zeta[a], -arc.distance_m / velocity(arc.medium) * 1e6);
        }
      }
      const Node& dn = topology.node(d);
      add_nonzero(r_row, xv,
                  -dn.processor->offset_m / velocity(Medium::kFibre) * 1e6);

      // Flow conservation: out - in = supply.
      balance[task.source.value].push_back({xv, -rate});
      balance[d.value].push_back({xv, rate});
      for (std::size_t v = 0; v < n_nodes; ++v) {
        if (balance[v].empty()) continue;
        m.add_constraint("flow" + fs + "_n" + std::to_string(v), std::move(balance[v]),
                         Sense::kEqual, 0.0);
      }
      m.add_constraint("rsd" + fs, std::move(r_row), Sense::kEqual, 0.0);
      m.add_constraint("qsd" + fs, std::move(q_row), Sense::kEqual, 0.0);
      m.add_constraint("pnon" + fs, {{xv, 1.0}, {y[k], -1.0}}, Sense::kLessEqual, 0.0);
    }
  }

  // Arrival rates, indicators and table-selected delays.
  std::vector<Term> power_row;
  const std::size_t P = m.add_variable("P", kC);
  const std::size_t R = m.add_variable("R", kC);
  const std::size_t Q = m.add_variable("Q", kC);
  power_row.push_back({P, 1.0});
  for (NodeId i : queues) {
    const Node& node = topology.node(i);
    const std::string is = "_i" + id(i);
    const std::size_t lv = *lam_i[i.value];
    std::vector<Term> arr = std::move(arrivals[i.value]);
    arr.insert(arr.begin(), Term{lv, 1.0});
    m.add_constraint("arr" + is, std::move(arr), Sense::kEqual, 0.0);

    const DelayLookupTable& table = tables.for_rate(node.service_rate_bps);
    std::vector<Term> ind{{lv, -1.0}}, one, sel{{*q_i[i.value], 1.0}};
    for (std::size_t a = 1; a < grid.size(); ++a) {
      if (!table.feasible(grid[a])) continue;
      const std::size_t sv = m.add_variable("sigma" + is + "_a" + std::to_string(a), kB);
      ind.push_back({sv, mbps(grid[a])});
      one.push_back({sv, 1.0});
      sel.push_back({sv, -table.delay(grid[a]) * 1e6});
    }
    m.add_constraint("ind" + is, std::move(ind), Sense::kEqual, 0.0);
    if (!one.empty()) m.add_constraint("one" + is, std::move(one), Sense::kLessEqual, 1.0);
    m.add_constraint("qsel" + is, std::move(sel), Sense::kEqual, 0.0);
    m.add_constraint("devon" + is, {{lv, 1.0}, {*u_i[i.value], -g1}}, Sense::kLessEqual, 0.0);

    const NetDeviceSpec& dev = params.device(node.kind);
    add_nonzero(power_row, *u_i[i.value], -dev.pue * dev.idle_w);
    add_nonzero(power_row, lv, -dev.pue * dev.w_per_bps * 1e6);
  }

  // PN capacity, ingress and power.
  for (std::size_t k = 0; k < pns.size(); ++k) {
    const NodeId d = pns[k];
    const ProcessorSpec& spec = params.processor(topology.node(d).processor->tier);
    std::vector<Term> cap, ingress;
    for (std::size_t s = 0; s < tasks.size(); ++s) {
      cap.push_back({x[s][k], tasks[s].demand_mips});
      ingress.push_back({x[s][k], mbps(tasks[s].data_rate_bps)});
      add_nonzero(power_row, x[s][k], -spec.pue * spec.w_per_mips * tasks[s].demand_mips);
    }
    add_nonzero(power_row, y[k], -(spec.pue * spec.idle_w + spec.adapter_w));
    if (!cap.empty()) {
      m.add_constraint("cap_d" + id(d), std::move(cap), Sense::kLessEqual, spec.capacity_mips);
    }
    if (spec.ingress_cap_bps > 0 && !ingress.empty()) {
      m.add_constraint("ingress_d" + id(d), std::move(ingress), Sense::kLessEqual,
                       mbps(spec.ingress_cap_bps));
    }
  }
  m.add_constraint("power", std::move(power_row), Sense::kEqual, 0.0);

  std::vector<Term> r_tot{{R, 1.0}}, q_tot{{Q, 1.0}};
  for (std::size_t v : r_sd) r_tot.push_back({v, -1.0});
  for (std::size_t v : q_sd) q_tot.push_back({v, -1.0});
  m.add_constraint("Rtot", std::move(r_tot), Sense::kEqual, 0.0);
  m.add_constraint("Qtot", std::move(q_tot), Sense::kEqual, 0.0);

  std::vector<Term> objective;
  add_nonzero(objective, P, weights.alpha);
  add_nonzero(objective, R, weights.beta * 1e-6);
  add_nonzero(objective, Q, weights.gamma * 1e-6);
  m.set_objective(std::move(objective));
  return m;
}

namespace {

std::string number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

constexpr std::size_t kLineLimit = 200;

// Writes `text` after a space, breaking to an indented line when it would
// overflow. Returns the new line width.
std::size_t write_piece(std::ostream& out, const std::string& text, std::size_t width) {
  if (width + text.size() + 1 > kLineLimit && width > 1) {
    out << "\n";
    width = 1;
  }
  out << ' ' << text;
  return width + text.size() + 1;
}

std::size_t write_terms(std::ostream& out, const MilpModel& model,
                        const std::vector<Term>& terms, std::size_t width) {
  for (const Term& t : terms) {
    std::string piece = t.coef < 0 ? "- " : "+ ";
    piece += number(std::abs(t.coef));
    piece += ' ';
    piece += model.variables()[t.var].name;
    width = write_piece(out, piece, width);
  }
  return width;
}

std::string_view sense_text(Sense s) {
  switch (s) {
    case Sense::kLessEqual: return "<=";
    case Sense::kGreaterEqual: return ">=";
    case Sense::kEqual: return "=";
  }
  return "=";
}

}  // namespace

void write_lp(const MilpModel& model, std::ostream& out) {
  out << "\\ vecopt task allocation model: " << model.variables().size() << " variables, "
      << model.constraints().size() << " constraints\n";
  out << "Minimize\n obj:";
  write_terms(out, model, model.objective(), 5);
  out << "\nSubject To\n";
  for (const Constraint& c : model.constraints()) {
    out << ' ' << c.name << ':';
    std::size_t width = write_terms(out, model, c.terms, c.name.size() + 2);
    std::string tail(sense_text(c.sense));
    tail += ' ';
    tail += number(c.rhs);
    write_piece(out, tail, width);
    out << '\n';
  }
  out << "Bounds\n";
  for (const Variable& v : model.variables()) {
    if (v.kind == VarKind::kBinary && v.lower == 0.0 && v.upper == 1.0) continue;
    const bool default_lower = v.lower == 0.0;
    const bool default_upper = std::isinf(v.upper);
    if (default_lower && default_upper) continue;
    if (v.lower == v.upper) {
      out << ' ' << v.name << " = " << number(v.lower) << '\n';
    } else if (default_upper) {
      out << ' ' << v.name << " >= " << number(v.lower) << '\n';
    } else {
      out << ' ' << number(v.lower) << " <= " << v.name << " <= " << number(v.upper) << '\n';
    }
  }
  out << "Binaries\n";
  for (const Variable& v : model.variables()) {
    if (v.kind == VarKind::kBinary) out << ' ' << v.name << '\n';
  }
  out << "End\n";
}

std::string lp_text(const MilpModel& model) {
  std::ostringstream out;
  write_lp(model, out);
  return out.str();
}

void write_lp_file(const MilpModel& model, const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + file.string() + " for writing");
  write_lp(model, out);
  out.flush();
  if (!out) throw IoError("failed writing " + file.string());
}

namespace {

// Sets `var` so that the equality row `row` holds given all other values.
void solve_row_for(const MilpModel& model, std::string_view row, std::size_t var,
                   std::vector<double>& values) {
  const std::optional<std::size_t> r = model.find_constraint(row);
  if (!r) throw InvalidRangeError("model has no row " + std::string(row));
  const Constraint& c = model.constraints()[*r];
  double rest = 0.0;
  double own = 0.0;
  for (const Term& t : c.terms) {
    if (t.var == var) {
      own += t.coef;
    } else {
      rest += t.coef * values[t.var];
    }
  }
  if (own == 0.0) throw InvalidRangeError("row " + std::string(row) + " does not define it");
  values[var] = (c.rhs - rest) / own;
}

}  // namespace

std::vector<double> milp_point(const MilpModel& model, const Topology& topology,
                               const TaskSet& tasks, const Allocation& allocation) {
  if (allocation.size() != tasks.size()) {
    throw InvalidRangeError("allocation does not cover every task");
  }
  std::vector<double> v(model.variables().size(), 0.0);
  auto set = [&](const std::string& name, double value) { v[model.variable(name)] = value; };

  for (std::size_t s = 0; s < tasks.size(); ++s) {
    const NodeId d = allocation[s];
    set("x" + flow_suffix(s, d), 1.0);
    set("y_d" + id(d), 1.0);
    const Path path = route(topology, tasks[s].source, d);
    for (std::size_t k = 0; k + 1 < path.size(); ++k) {
      const std::string as = flow_suffix(s, d) + "_i" + id(path[k]) + "_j" + id(path[k + 1]);
      set("lam" + as, to_mbps(tasks[s].data_rate_bps));
      set("zeta" + as, 1.0);
    }
  }

  const std::vector<BitRate> grid = achievable_arrivals(tasks);
  const NodeLoad load = node_arrivals(topology, tasks, allocation);
  for (const Node& node : topology.nodes()) {
    if (!has_queue(node)) continue;
    const std::string is = "_i" + id(node.id);
    const std::size_t lv = model.variable("lam" + is);
    solve_row_for(model, "arr" + is, lv, v);
    const BitRate lambda = load.at(node.id);
    if (lambda > 0) {
      v[model.variable("u" + is)] = 1.0;
      const auto it = std::lower_bound(grid.begin(), grid.end(), lambda);
      const std::string sigma =
          "sigma" + is + "_a" + std::to_string(static_cast<std::size_t>(it - grid.begin()));
      if (auto sv = model.find_variable(sigma)) v[*sv] = 1.0;
    }
    solve_row_for(model, "qsel" + is, model.variable("q" + is), v);
  }

  for (const Variable& var : model.variables()) {
    if (!var.name.starts_with("qa_")) continue;
    const std::string as = var.name.substr(2);
    const std::size_t j = as.rfind("_j");
    const double zeta = v[model.variable("zeta" + as)];
    v[model.variable(var.name)] = zeta * v[model.variable("q_i" + as.substr(j + 2))];
  }

  for (std::size_t s = 0; s < tasks.size(); ++s) {
    for (NodeId d : topology.processing_nodes()) {
      const std::string fs = flow_suffix(s, d);
      solve_row_for(model, "rsd" + fs, model.variable("r" + fs), v);
      solve_row_for(model, "qsd" + fs, model.variable("q" + fs), v);
    }
  }
  solve_row_for(model, "Rtot", model.variable("R"), v);
  solve_row_for(model, "Qtot", model.variable("Q"), v);
  solve_row_for(model, "power", model.variable("P"), v);
  return v;
}

double objective_value(const MilpModel& model, const std::vector<double>& values) {
  double sum = 0.0;
  for (const Term& t : model.objective()) sum += t.coef * values.at(t.var);
  return sum;
}

std::vector<std::string> check_point(const MilpModel& model,
                                     const std::vector<double>& values, double tolerance) {
  std::vector<std::string> bad;
  if (values.size() != model.variables().size()) {
    bad.push_back("value vector size mismatch");
    return bad;
  }
  for (std::size_t k = 0; k < values.size(); ++k) {
    const Variable& var = model.variables()[k];
    const double x = values[k];
    const double lo = var.lower;
    const double hi = var.upper;
    if (x < lo - tolerance || x > hi + tolerance) bad.push_back("bound " + var.name);
    if (var.kind == VarKind::kBinary && std::abs(x - std::round(x)) > tolerance) {
      bad.push_back("integrality " + var.name);
    }
  }
  for (const Constraint& c : model.constraints()) {
    double lhs = 0.0;
    double scale = std::max(1.0, std::abs(c.rhs));
    for (const Term& t : c.terms) {
      lhs += t.coef * values[t.var];
      scale = std::max(scale, std::abs(t.coef * values[t.var]));
    }
    const double slack = tolerance * scale;
    const bool ok = (c.sense == Sense::kLessEqual && lhs <= c.rhs + slack) ||
                    (c.sense == Sense::kGreaterEqual && lhs >= c.rhs - slack) ||
                    (c.sense == Sense::kEqual && std::abs(lhs - c.rhs) <= slack);
    if (!ok) bad.push_back(c.name);
  }
  return bad;
}

}  // namespace vecopt
