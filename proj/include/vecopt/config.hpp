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

#ifndef VECOPT_CONFIG_HPP
#define VECOPT_CONFIG_HPP

#include <filesystem>
#include <string>
#include <string_view>

#include "vecopt/power.hpp"
#include "vecopt/topology.hpp"
#include "vecopt/workload.hpp"

// Structured-text (JSON) readers and writers for topologies, task sets and
// power parameters.
namespace vecopt {

std::string_view default_power_params_json();

PowerParams power_params_from_json_text(std::string_view text);
std::string power_params_to_json_text(const PowerParams& params);
PowerParams load_power_params(const std::filesystem::path& file);

Topology topology_from_json_text(std::string_view text);
std::string topology_to_json_text(const Topology& topology);
Topology load_topology(const std::filesystem::path& file);

// Task records carry id and demand_mips; the data rate follows from drr.
// Tasks are assigned to the topology's source nodes round-robin unless a
// record names its "source".
TaskSet task_set_from_json_text(std::string_view text, const Topology& topology);
std::string task_set_to_json_text(const TaskSet& tasks, const Topology& topology);
TaskSet load_task_set(const std::filesystem::path& file, const Topology& topology);

std::string read_text_file(const std::filesystem::path& file);
void write_text_file(const std::filesystem::path& file, std::string_view text);

}  // namespace vecopt

#endif  // VECOPT_CONFIG_HPP
