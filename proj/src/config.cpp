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

#include "vecopt/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "vecopt/error.hpp"

namespace vecopt {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

json parse(std::string_view text, std::string_view what) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::exception& e) {
    throw ConfigError(std::string(what) + ": " + e.what());
  }
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("field '") + key + "': " + e.what());
  }
}

template <typename T>
T require(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(std::string("missing field '") + key + "'");
  try {
    return it->get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("field '") + key + "': " + e.what());
  }
}

BitRate require_rate(const json& obj, const char* key) {
  return to_bit_rate(require<double>(obj, key));
}

}  // namespace

PowerParams power_params_from_json_text(std::string_view text) {
  const json doc = parse(text, "power parameters");
  PowerParams params;
  try {
    for (const auto& [name, p] : doc.at("processors").items()) {
      ProcessorSpec spec;
      spec.capacity_mips = require<double>(p, "capacity_mips");
      spec.idle_w = get_or(p, "idle_w", 0.0);
      spec.w_per_mips = get_or(p, "w_per_mips", 0.0);
      spec.pue = get_or(p, "pue", 1.0);
      spec.adapter_w = get_or(p, "adapter_w", 0.0);
      spec.ingress_cap_bps = to_bit_rate(get_or(p, "ingress_cap_bps", 0.0));
      params.processors[pn_tier_from_string(name)] = spec;
    }
    for (const auto& [name, d] : doc.at("devices").items()) {
      NetDeviceSpec spec;
      spec.idle_w = get_or(d, "idle_w", 0.0);
      spec.w_per_bps = get_or(d, "w_per_bps", 0.0);
      spec.pue = get_or(d, "pue", 1.0);
      params.devices[node_kind_from_string(name)] = spec;
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("power parameters: ") + e.what());
  }
  params.validate();
  return params;
}

std::string power_params_to_json_text(const PowerParams& params) {
  ordered_json doc;
  doc["processors"] = ordered_json::object();
  for (const auto& [tier, p] : params.processors) {
    doc["processors"][std::string(to_string(tier))] = {
        {"capacity_mips", p.capacity_mips}, {"idle_w", p.idle_w},
        {"w_per_mips", p.w_per_mips},       {"pue", p.pue},
        {"adapter_w", p.adapter_w},         {"ingress_cap_bps", p.ingress_cap_bps}};
  }
  doc["devices"] = ordered_json::object();
  for (const auto& [kind, d] : params.devices) {
    doc["devices"][std::string(to_string(kind))] = {
        {"idle_w", d.idle_w}, {"w_per_bps", d.w_per_bps}, {"pue", d.pue}};
  }
  return doc.dump(2) + "\n";
}

PowerParams load_power_params(const std::filesystem::path& file) {
  return power_params_from_json_text(read_text_file(file));
}

Topology topology_from_json_text(std::string_view text) {
  const json doc = parse(text, "topology");
  std::vector<Node> nodes;
  std::vector<Link> links;
  try {
    for (const json& n : doc.at("nodes")) {
      Node node;
      node.id = NodeId{nodes.size()};
      node.name = require<std::string>(n, "name");
      node.kind = node_kind_from_string(require<std::string>(n, "kind"));
      node.service_rate_bps = require_rate(n, "service_rate_bps");
      if (auto it = n.find("processor"); it != n.end() && !it->is_null()) {
        node.processor = Processor{pn_tier_from_string(require<std::string>(*it, "tier")),
                                   get_or(*it, "offset_m", 0.0)};
      }
      nodes.push_back(std::move(node));
    }
    auto lookup = [&nodes](const std::string& name) {
      for (const Node& n : nodes) {
        if (n.name == name) return n.id;
      }
      throw ConfigError("link references unknown node '" + name + "'");
    };
    for (const json& l : doc.at("links")) {
      links.push_back(Link{lookup(require<std::string>(l, "a")),
                           lookup(require<std::string>(l, "b")),
                           require<double>(l, "distance_m"),
                           medium_from_string(get_or<std::string>(l, "medium", "fibre"))});
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("topology: ") + e.what());
  }
  const auto packet_bits = get_or<std::int64_t>(doc, "packet_size_bits", kEthernetPacketBits);
  return Topology(std::move(nodes), std::move(links), packet_bits);
}

std::string topology_to_json_text(const Topology& topology) {
  ordered_json doc;
  doc["packet_size_bits"] = topology.packet_bits();
  doc["nodes"] = ordered_json::array();
  for (const Node& n : topology.nodes()) {
    ordered_json node = {{"name", n.name},
                         {"kind", std::string(to_string(n.kind))},
                         {"service_rate_bps", n.service_rate_bps}};
    if (n.processor) {
      node["processor"] = {{"tier", std::string(to_string(n.processor->tier))},
                           {"offset_m", n.processor->offset_m}};
    }
    doc["nodes"].push_back(std::move(node));
  }
  doc["links"] = ordered_json::array();
  for (const Link& l : topology.links()) {
    doc["links"].push_back({{"a", topology.node(l.a).name},
                            {"b", topology.node(l.b).name},
                            {"distance_m", l.distance_m},
                            {"medium", std::string(to_string(l.medium))}});
  }
  return doc.dump(2) + "\n";
}

Topology load_topology(const std::filesystem::path& file) {
  return topology_from_json_text(read_text_file(file));
}

TaskSet task_set_from_json_text(std::string_view text, const Topology& topology) {
  const json doc = parse(text, "task set");
  const std::vector<NodeId>& sources = topology.source_nodes();
  std::vector<Task> tasks;
  double drr = 0.0;
  try {
    drr = require<double>(doc, "drr");
    for (const json& t : doc.at("tasks")) {
      Task task;
      task.id = get_or<std::size_t>(t, "id", tasks.size());
      task.demand_mips = require<double>(t, "demand_mips");
      const double task_drr = get_or(t, "drr", drr);
      task.data_rate_bps = data_rate_for(task.demand_mips, task_drr);
      if (auto it = t.find("source"); it != t.end()) {
        auto id = topology.find(it->get<std::string>());
        if (!id || topology.node(*id).kind != NodeKind::kSourceNode) {
          throw ConfigError("task source '" + it->get<std::string>() +
                            "' is not a source node");
        }
        task.source = *id;
      } else {
        if (sources.empty()) throw ConfigError("topology has no source nodes");
        task.source = sources[tasks.size() % sources.size()];
      }
      tasks.push_back(task);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("task set: ") + e.what());
  }
  return TaskSet(std::move(tasks), drr);
}

std::string task_set_to_json_text(const TaskSet& tasks, const Topology& topology) {
  ordered_json doc;
  doc["drr"] = tasks.drr();
  doc["tasks"] = ordered_json::array();
  for (const Task& t : tasks.tasks()) {
    doc["tasks"].push_back({{"id", t.id},
                            {"demand_mips", t.demand_mips},
                            {"source", topology.node(t.source).name}});
  }
  return doc.dump(2) + "\n";
}

TaskSet load_task_set(const std::filesystem::path& file, const Topology& topology) {
  return task_set_from_json_text(read_text_file(file), topology);
}

std::string read_text_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoError("cannot open '" + file.string() + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::filesystem::path& file, std::string_view text) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + file.string() + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("failed writing '" + file.string() + "'");
}

}  // namespace vecopt
