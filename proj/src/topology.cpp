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

#include "vecopt/topology.hpp"

#include <algorithm>
#include <array>
#include <queue>
#include <string>
#include <utility>

#include "vecopt/error.hpp"

namespace vecopt {

namespace {

constexpr std::array<std::pair<NodeKind, std::string_view>, 10> kKindNames{{
    {NodeKind::kSourceNode, "source"},
    {NodeKind::kApWired, "ap_wired"},
    {NodeKind::kApWireless, "ap_wireless"},
    {NodeKind::kOnu, "onu"},
    {NodeKind::kOlt, "olt"},
    {NodeKind::kMetroSwitch, "metro_switch"},
    {NodeKind::kMetroRouter, "metro_router"},
    {NodeKind::kCoreRouter, "core_router"},
    {NodeKind::kCoreSwitch, "core_switch"},
    {NodeKind::kVehicularNode, "vehicle"},
}};

constexpr std::array<std::pair<PnTier, std::string_view>, 5> kTierNames{{
    {PnTier::kVn, "VN"},
    {PnTier::kNf, "NF"},
    {PnTier::kLf, "LF"},
    {PnTier::kMf, "MF"},
    {PnTier::kCc, "CC"},
}};

bool is_source(const Node& n) { return n.kind == NodeKind::kSourceNode; }

}  // namespace

std::string_view to_string(NodeKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

std::string_view to_string(PnTier tier) {
  for (const auto& [t, name] : kTierNames) {
    if (t == tier) return name;
  }
  return "unknown";
}

std::string_view to_string(Medium medium) {
  return medium == Medium::kFibre ? "fibre" : "free_space";
}

NodeKind node_kind_from_string(std::string_view text) {
  for (const auto& [k, name] : kKindNames) {
    if (name == text) return k;
  }
  throw ConfigError("unknown node kind '" + std::string(text) + "'");
}

PnTier pn_tier_from_string(std::string_view text) {
  for (const auto& [t, name] : kTierNames) {
    if (name == text) return t;
  }
  throw ConfigError("unknown processing tier '" + std::string(text) + "'");
}

Medium medium_from_string(std::string_view text) {
  if (text == "fibre") return Medium::kFibre;
  if (text == "free_space") return Medium::kFreeSpace;
  throw ConfigError("unknown link medium '" + std::string(text) + "'");
}

Topology::Topology(std::vector<Node> nodes, std::vector<Link> links,
                   std::int64_t packet_bits)
    : nodes_(std::move(nodes)),
      links_(std::move(links)),
      packet_bits_(packet_bits) {
  validate_and_index();
}

void Topology::validate_and_index() {
  if (packet_bits_ <= 0) throw ConfigError("packet size must be positive");
  const std::size_t n = nodes_.size();
  std::optional<NodeId> wired, wireless;
  for (std::size_t i = 0; i < n; ++i) {
    Node& node = nodes_[i];
    if (node.id.value != i) {
      throw ConfigError("node '" + node.name + "' has id " +
                        std::to_string(node.id.value) + ", expected " +
                        std::to_string(i));
    }
    if (node.service_rate_bps <= 0) {
      throw ConfigError("node '" + node.name + "' has non-positive service rate");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (nodes_[j].name == node.name) {
        throw ConfigError("duplicate node name '" + node.name + "'");
      }
    }
    switch (node.kind) {
      case NodeKind::kApWired:
        if (wired) throw ConfigError("more than one wired AP interface");
        wired = node.id;
        break;
      case NodeKind::kApWireless:
        if (wireless) throw ConfigError("more than one wireless AP interface");
        wireless = node.id;
        break;
      case NodeKind::kVehicularNode:
        if (!node.processor) node.processor = Processor{PnTier::kVn, 0.0};
        if (node.processor->tier != PnTier::kVn) {
          throw ConfigError("vehicle '" + node.name + "' must host a VN processor");
        }
        break;
      default:
        break;
    }
    if (node.processor) {
      if (node.kind == NodeKind::kSourceNode || node.kind == NodeKind::kApWired ||
          node.kind == NodeKind::kApWireless) {
        throw ConfigError("node '" + node.name + "' cannot host a processor");
      }
      if (node.processor->tier == PnTier::kVn &&
          node.kind != NodeKind::kVehicularNode) {
        throw ConfigError("VN processor on non-vehicle node '" + node.name + "'");
      }
      if (node.processor->offset_m < 0.0) {
        throw ConfigError("negative processor offset on '" + node.name + "'");
      }
    }
    if (is_source(node)) sources_.push_back(node.id);
  }
  if (!wired || !wireless) {
    throw ConfigError("topology needs exactly one wired and one wireless AP interface");
  }
  ap_wired_ = *wired;
  ap_wireless_ = *wireless;

  incident_.assign(n, {});
  for (std::size_t li = 0; li < links_.size(); ++li) {
    const Link& link = links_[li];
    if (link.a.value >= n || link.b.value >= n || link.a == link.b) {
      throw ConfigError("link " + std::to_string(li) + " has invalid endpoints");
    }
    // Collocated devices (router/switch pairs) are joined by 0 m links.
    if (!(link.distance_m >= 0.0)) {
      throw ConfigError("link " + std::to_string(li) + " has negative distance");
    }
    const Node& a = nodes_[link.a.value];
    const Node& b = nodes_[link.b.value];
    const bool wireless_link =
        (a.kind == NodeKind::kApWireless &&
         (b.kind == NodeKind::kVehicularNode || b.kind == NodeKind::kSourceNode)) ||
        (b.kind == NodeKind::kApWireless &&
         (a.kind == NodeKind::kVehicularNode || a.kind == NodeKind::kSourceNode));
    if (link.medium == Medium::kFreeSpace && !wireless_link) {
      throw ConfigError("free-space link between '" + a.name + "' and '" + b.name +
                        "' is only allowed at the wireless AP interface");
    }
    if (a.kind == NodeKind::kVehicularNode || b.kind == NodeKind::kVehicularNode) {
      if (!wireless_link) {
        throw ConfigError("vehicles may only attach to the wireless AP interface");
      }
    }
    if (is_source(a) || is_source(b)) {
      const Node& other = is_source(a) ? b : a;
      if (other.kind != NodeKind::kApWired && other.kind != NodeKind::kApWireless) {
        throw ConfigError("source '" + (is_source(a) ? a.name : b.name) +
                          "' must attach to the AP site");
      }
    }
    incident_[link.a.value].push_back(li);
    incident_[link.b.value].push_back(li);
  }

  // Root the infrastructure (everything except sources) at the AP interfaces
  // and require it to be a forest.
  parent_.assign(n, std::nullopt);
  std::vector<bool> seen(n, false);
  for (NodeId root : {ap_wired_, ap_wireless_}) {
    std::queue<NodeId> frontier;
    frontier.push(root);
    seen[root.value] = true;
    while (!frontier.empty()) {
      NodeId cur = frontier.front();
      frontier.pop();
      for (std::size_t li : incident_[cur.value]) {
        const Link& link = links_[li];
        NodeId next = link.a == cur ? link.b : link.a;
        if (is_source(nodes_[next.value])) continue;
        if (parent_[cur.value] && *parent_[cur.value] == next) continue;
        if (seen[next.value]) {
          throw ConfigError("infrastructure graph has a cycle through '" +
                            nodes_[next.value].name + "'");
        }
        seen[next.value] = true;
        parent_[next.value] = cur;
        frontier.push(next);
      }
    }
  }
  for (const Node& node : nodes_) {
    if (!is_source(node) && !seen[node.id.value]) {
      throw ConfigError("node '" + node.name + "' is not reachable from the AP");
    }
  }
  for (NodeId s : sources_) {
    if (!link_between(s, ap_wired_) || !link_between(s, ap_wireless_)) {
      throw ConfigError("source '" + nodes_[s.value].name +
                        "' must link to both AP interfaces");
    }
  }
  for (NodeId v : vehicular_nodes()) {
    if (parent_[v.value] != ap_wireless_) {
      throw ConfigError("vehicle '" + nodes_[v.value].name +
                        "' must hang directly off the wireless AP interface");
    }
  }

  // Canonical PN order: VNs first (by id), then fixed tiers NF, LF, MF, CC.
  std::vector<NodeId> fixed;
  for (const Node& node : nodes_) {
    if (!node.processor) continue;
    if (node.processor->tier == PnTier::kVn) {
      pns_.push_back(node.id);
    } else {
      fixed.push_back(node.id);
    }
  }
  std::stable_sort(fixed.begin(), fixed.end(), [this](NodeId a, NodeId b) {
    return nodes_[a.value].processor->tier < nodes_[b.value].processor->tier;
  });
  for (std::size_t i = 1; i < fixed.size(); ++i) {
    if (nodes_[fixed[i].value].processor->tier ==
        nodes_[fixed[i - 1].value].processor->tier) {
      throw ConfigError("more than one " +
                        std::string(to_string(nodes_[fixed[i].value].processor->tier)) +
                        " processor");
    }
  }
  pns_.insert(pns_.end(), fixed.begin(), fixed.end());
  pn_rank_.assign(n, pns_.size());
  for (std::size_t r = 0; r < pns_.size(); ++r) pn_rank_[pns_[r].value] = r;
}

const Node& Topology::node(NodeId id) const {
  if (id.value >= nodes_.size()) {
    throw UnknownNodeError("unknown node id " + std::to_string(id.value));
  }
  return nodes_[id.value];
}

std::optional<NodeId> Topology::find(std::string_view name) const {
  for (const Node& node : nodes_) {
    if (node.name == name) return node.id;
  }
  return std::nullopt;
}

std::vector<NodeId> Topology::vehicular_nodes() const {
  std::vector<NodeId> out;
  for (const Node& node : nodes_) {
    if (node.kind == NodeKind::kVehicularNode) out.push_back(node.id);
  }
  return out;
}

std::optional<NodeId> Topology::processing_node(PnTier tier) const {
  for (NodeId id : pns_) {
    if (nodes_[id.value].processor->tier == tier) return id;
  }
  return std::nullopt;
}

bool Topology::is_processing_node(NodeId id) const {
  return id.value < nodes_.size() && nodes_[id.value].processor.has_value();
}

std::size_t Topology::pn_rank(NodeId id) const {
  if (!is_processing_node(id)) {
    throw NotAProcessorError("node " + std::to_string(id.value) +
                             " hosts no processor");
  }
  return pn_rank_[id.value];
}

const Link* Topology::link_between(NodeId a, NodeId b) const {
  if (a.value >= incident_.size()) return nullptr;
  for (std::size_t li : incident_[a.value]) {
    const Link& link = links_[li];
    if ((link.a == a && link.b == b) || (link.a == b && link.b == a)) return &link;
  }
  return nullptr;
}

Topology Topology::with_ap_wireless_rate(BitRate rate) const {
  std::vector<Node> nodes = nodes_;
  nodes[ap_wireless_.value].service_rate_bps = rate;
  return Topology(std::move(nodes), links_, packet_bits_);
}

Topology default_architecture(const ArchitectureOptions& o) {
  if (o.ap_wireless_rate <= 0) throw ConfigError("AP wireless rate must be positive");
  std::vector<Node> nodes;
  std::vector<Link> links;
  auto add = [&nodes](std::string name, NodeKind kind, BitRate rate,
                      std::optional<Processor> proc = std::nullopt) {
    NodeId id{nodes.size()};
    nodes.push_back(Node{id, std::move(name), kind, rate, proc});
    return id;
  };
  auto connect = [&links](NodeId a, NodeId b, double m, Medium medium) {
    links.push_back(Link{a, b, m, medium});
  };

  NodeId ap = add("AP_W", NodeKind::kApWired, o.ap_wired_rate);
  NodeId apl = add("AP_WL", NodeKind::kApWireless, o.ap_wireless_rate);
  NodeId onu = add("ONU", NodeKind::kOnu, o.access_rate,
                   Processor{PnTier::kNf, o.nf_offset_m});
  NodeId olt = add("OLT", NodeKind::kOlt, o.access_rate,
                   Processor{PnTier::kLf, o.lf_offset_m});
  NodeId msw = add("METRO_SW", NodeKind::kMetroSwitch, o.access_rate);
  NodeId mrt = add("METRO_RT", NodeKind::kMetroRouter, o.access_rate,
                   Processor{PnTier::kMf, o.mf_offset_m});
  NodeId crt = add("CORE_RT", NodeKind::kCoreRouter, o.core_rate);
  NodeId csw = add("CORE_SW", NodeKind::kCoreSwitch, o.core_rate,
                   Processor{PnTier::kCc, o.cc_offset_m});
  connect(ap, onu, o.ap_onu_m, Medium::kFibre);
  connect(onu, olt, o.onu_olt_m, Medium::kFibre);
  connect(olt, msw, o.olt_metro_m, Medium::kFibre);
  connect(msw, mrt, o.metro_switch_router_m, Medium::kFibre);
  connect(mrt, crt, o.metro_core_m, Medium::kFibre);
  connect(crt, csw, o.core_router_switch_m, Medium::kFibre);
  for (std::size_t v = 0; v < o.n_vn; ++v) {
    NodeId vn = add("VN" + std::to_string(v + 1), NodeKind::kVehicularNode,
                    o.access_rate, Processor{PnTier::kVn, 0.0});
    connect(apl, vn, o.ap_vn_m, Medium::kFreeSpace);
  }
  for (std::size_t s = 0; s < o.n_sources; ++s) {
    NodeId sn = add("SN" + std::to_string(s + 1), NodeKind::kSourceNode,
                    o.access_rate);
    connect(sn, ap, o.sn_ap_m, Medium::kFibre);
    connect(sn, apl, o.sn_ap_m, Medium::kFreeSpace);
  }
  return Topology(std::move(nodes), std::move(links), o.packet_bits);
}

Topology default_architecture(std::size_t n_vn, BitRate ap_wireless_rate) {
  ArchitectureOptions options;
  options.n_vn = n_vn;
  options.ap_wireless_rate = ap_wireless_rate;
  return default_architecture(options);
}

Path route(const Topology& topology, NodeId source, NodeId destination) {
  const Node& src = topology.node(source);
  const Node& dst = topology.node(destination);
  if (src.kind != NodeKind::kSourceNode) {
    throw UnknownNodeError("route source '" + src.name + "' is not a source node");
  }
  if (!dst.processor) {
    throw NotAProcessorError("route destination '" + dst.name +
                             "' hosts no processor");
  }
  const NodeId entry = dst.processor->tier == PnTier::kVn ? topology.ap_wireless()
                                                          : topology.ap_wired();
  Path reversed;
  std::optional<NodeId> cur = destination;
  while (cur && *cur != entry) {
    reversed.push_back(*cur);
    cur = topology.parent(*cur);
  }
  if (!cur) {
    throw NotAProcessorError("processor '" + dst.name +
                             "' is not reachable through its AP interface");
  }
  Path path{source, entry};
  path.insert(path.end(), reversed.rbegin(), reversed.rend());
  return path;
}

}  // namespace vecopt
