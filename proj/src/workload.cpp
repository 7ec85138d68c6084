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

#include "vecopt/workload.hpp"

#include <cmath>
#include <numeric>

#include "vecopt/error.hpp"

namespace vecopt {

BitRate data_rate_for(double demand_mips, double drr) {
  return to_bit_rate(drr * demand_mips * static_cast<double>(kMbps));
}

TaskSet::TaskSet(std::vector<Task> tasks, double drr)
    : tasks_(std::move(tasks)), drr_(drr) {
  for (std::size_t i = 0; i < tasks_.size(); ++i) {
    if (tasks_[i].demand_mips <= 0.0 || !std::isfinite(tasks_[i].demand_mips)) {
      throw InvalidRangeError("task " + std::to_string(tasks_[i].id) +
                              " has non-positive demand");
    }
    if (tasks_[i].data_rate_bps < 0) {
      throw InvalidRangeError("task " + std::to_string(tasks_[i].id) +
                              " has negative data rate");
    }
  }
}

BitRate TaskSet::total_traffic_bps() const {
  BitRate total = 0;
  for (const Task& t : tasks_) total += t.data_rate_bps;
  return total;
}

double TaskSet::total_mips() const {
  double total = 0.0;
  for (const Task& t : tasks_) total += t.demand_mips;
  return total;
}

TaskSet make_task_set(std::span<const double> demands_mips, double drr,
                      std::span<const NodeId> sources) {
  if (!demands_mips.empty() && sources.empty()) {
    throw InvalidRangeError("tasks need at least one source node");
  }
  if (drr < 0.0) throw InvalidRangeError("data rate ratio must be non-negative");
  std::vector<Task> tasks;
  tasks.reserve(demands_mips.size());
  for (std::size_t i = 0; i < demands_mips.size(); ++i) {
    tasks.push_back(Task{i, demands_mips[i], data_rate_for(demands_mips[i], drr),
                         sources[i % sources.size()]});
  }
  return TaskSet(std::move(tasks), drr);
}

std::vector<TaskSet> uniform_sweep(std::size_t n_tasks, double demand_min,
                                   double demand_max, double step, double drr,
                                   std::span<const NodeId> sources) {
  if (!(demand_min > 0.0) || !(demand_max >= demand_min) || !(step > 0.0)) {
    throw InvalidRangeError("sweep needs 0 < min <= max and step > 0");
  }
  const auto points =
      static_cast<std::size_t>(std::floor((demand_max - demand_min) / step + 1e-9)) + 1;
  std::vector<TaskSet> sweep;
  sweep.reserve(points);
  for (std::size_t k = 0; k < points; ++k) {
    const double demand = demand_min + static_cast<double>(k) * step;
    std::vector<double> demands(n_tasks, demand);
    sweep.push_back(make_task_set(demands, drr, sources));
  }
  return sweep;
}

}  // namespace vecopt
