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

#ifndef VECOPT_TOPOLOGY_HPP
#define VECOPT_TOPOLOGY_HPP

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vecopt/units.hpp"

namespace vecopt {

enum class NodeKind {
  kSourceNode,
  kApWired,
  kApWireless,
  kOnu,
  kOlt,
  kMetroSwitch,
  kMetroRouter,
  kCoreRouter,
  kCoreSwitch,
  kVehicularNode,
};

// Processing tiers, in the order used for tie-breaking and reporting.
enum class PnTier { kVn, kNf, kLf, kMf, kCc };

enum class Medium { kFibre, kFreeSpace };

std::string_view to_string(NodeKind kind);
std::string_view to_string(PnTier tier);
std::string_view to_string(Medium medium);
NodeKind node_kind_from_string(std::string_view text);
PnTier pn_tier_from_string(std::string_view text);
Medium medium_from_string(std::string_view text);

struct NodeId {
  std::size_t value = 0;
  friend auto operator<=>(const NodeId&, const NodeId&) = default;
};

// A processor attached to a network node. Fixed fog/cloud processors sit
// `offset_m` of fibre away from their host; a vehicle is its own processor.
struct Processor {
  PnTier tier = PnTier::kNf;
  double offset_m = 0.0;
};

struct Node {
  NodeId id;
  std::string name;
  NodeKind kind = NodeKind::kOnu;
  BitRate service_rate_bps = 10 * kGbps;
  std::optional<Processor> processor;
};

struct Link {
  NodeId a;
  NodeId b;
  double distance_m = 0.0;
  Medium medium = Medium::kFibre;
};

using Path = std::vector<NodeId>;

// Immutable cloud-fog-vehicular network. Apart from the source nodes, which
// attach to both access-point interfaces, the graph must be a forest rooted
// at the two AP interface nodes so that every route is unique.
class Topology {
 public:
  Topology(std::vector<Node> nodes, std::vector<Link> links,
           std::int64_t packet_bits = kEthernetPacketBits);

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Link>& links() const { return links_; }
  const Node& node(NodeId id) const;
  std::optional<NodeId> find(std::string_view name) const;
  std::int64_t packet_bits() const { return packet_bits_; }

  NodeId ap_wired() const { return ap_wired_; }
  NodeId ap_wireless() const { return ap_wireless_; }
  const std::vector<NodeId>& source_nodes() const { return sources_; }
  // Processing nodes in canonical order: VNs by id, then NF, LF, MF, CC.
  const std::vector<NodeId>& processing_nodes() const { return pns_; }
  std::vector<NodeId> vehicular_nodes() const;
  std::optional<NodeId> processing_node(PnTier tier) const;

  bool is_processing_node(NodeId id) const;
  // Position of a PN in processing_nodes(); used for lexicographic ordering.
  std::size_t pn_rank(NodeId id) const;

  // Link joining two adjacent nodes, or nullptr.
  const Link* link_between(NodeId a, NodeId b) const;
  // Parent towards the AP interface that roots the node's subtree.
  std::optional<NodeId> parent(NodeId id) const { return parent_.at(id.value); }

  double packets_per_second(BitRate rate) const {
    return static_cast<double>(rate) / static_cast<double>(packet_bits_);
  }

  // Same network with the AP wireless interface running at `rate`.
  Topology with_ap_wireless_rate(BitRate rate) const;

 private:
  void validate_and_index();

  std::vector<Node> nodes_;
  std::vector<Link> links_;
  std::int64_t packet_bits_;
  NodeId ap_wired_;
  NodeId ap_wireless_;
  std::vector<NodeId> sources_;
  std::vector<NodeId> pns_;
  std::vector<std::size_t> pn_rank_;
  std::vector<std::optional<NodeId>> parent_;
  std::vector<std::vector<std::size_t>> incident_;
};

struct ArchitectureOptions {
  std::size_t n_vn = 8;
  std::size_t n_sources = 10;
  BitRate ap_wireless_rate = 1 * kGbps;
  BitRate ap_wired_rate = 10 * kGbps;
  BitRate access_rate = 10 * kGbps;  // ONU, OLT and metro devices
  BitRate core_rate = 40 * kGbps;
  double sn_ap_m = 10.0;
  double ap_vn_m = 100.0;
  double ap_onu_m = 100.0;
  double onu_olt_m = 10'000.0;
  double olt_metro_m = 5'000.0;
  double metro_switch_router_m = 0.0;
  double metro_core_m = 300'000.0;
  double core_router_switch_m = 0.0;
  double lf_offset_m = 0.0;
  double mf_offset_m = 2'000.0;
  double cc_offset_m = 0.0;
  double nf_offset_m = 0.0;
  std::int64_t packet_bits = kEthernetPacketBits;
};

Topology default_architecture(const ArchitectureOptions& options);
Topology default_architecture(std::size_t n_vn, BitRate ap_wireless_rate);

// Unique path from a source node to the node hosting the destination
// processor: [SN, ApWireless, VN] or [SN, ApWired, ONU, ...].
Path route(const Topology& topology, NodeId source, NodeId destination);

}  // namespace vecopt

#endif  // VECOPT_TOPOLOGY_HPP
