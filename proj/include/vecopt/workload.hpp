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

#ifndef VECOPT_WORKLOAD_HPP
#define VECOPT_WORKLOAD_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "vecopt/topology.hpp"
#include "vecopt/units.hpp"

namespace vecopt {

struct Task {
  std::size_t id = 0;
  double demand_mips = 0.0;
  BitRate data_rate_bps = 0;
  NodeId source;
};

// A task's traffic: drr * demand, read as Mb/s (0.1 * 400 MIPS -> 40 Mb/s).
BitRate data_rate_for(double demand_mips, double drr);

class TaskSet {
 public:
  TaskSet() = default;
  TaskSet(std::vector<Task> tasks, double drr);

  const std::vector<Task>& tasks() const { return tasks_; }
  std::size_t size() const { return tasks_.size(); }
  bool empty() const { return tasks_.empty(); }
  const Task& operator[](std::size_t i) const { return tasks_[i]; }
  double drr() const { return drr_; }

  BitRate total_traffic_bps() const;
  double total_mips() const;

 private:
  std::vector<Task> tasks_;
  double drr_ = 0.0;
};

// Tasks with the given demands; task i originates at sources[i % size].
TaskSet make_task_set(std::span<const double> demands_mips, double drr,
                      std::span<const NodeId> sources);

// One task set per demand value min, min+step, ..., max (inclusive), each
// holding n_tasks identical tasks.
std::vector<TaskSet> uniform_sweep(std::size_t n_tasks, double demand_min,
                                   double demand_max, double step, double drr,
                                   std::span<const NodeId> sources);

// Task -> processing node. Index i holds the PN of task i.
using Allocation = std::vector<NodeId>;

}  // namespace vecopt

#endif  // VECOPT_WORKLOAD_HPP
