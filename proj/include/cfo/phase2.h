// Copyright 2026 The CFO Planner Authors.
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

// Charging plan DP over footprint budgets, the waiting-time subproblem and
// plan recovery.

#pragma once

#include <optional>
#include <vector>

#include "cfo/common.h"
#include "cfo/discretize.h"
#include "cfo/model.h"
#include "cfo/phase1.h"

namespace cfo {

struct WaitQuery {
  const ChargingStation* station = nullptr;
  Kwh beta_u = 0.0;  // SoC at charging start
  Hours t_c = 0.0;
  Hours tau_u = 0.0;  // arrival time
  Kg f_hat = 0.0;     // footprint budget
};

// Smallest wait in [tw_lb, tw_ub] after which charging the query's energy
// costs at most f_hat, or nullopt. Throws kOutOfDomain if the intensity
// profile does not cover the wait window.
std::optional<Hours> min_wait(const WaitQuery& q);

// As min_wait() with the charged energy given directly.
std::optional<Hours> min_wait_for_energy(const ChargingStation& st, Kwh energy,
                                         Hours tau_u, Kg f_hat);

struct SigmaStats {
  int hubs = 0;
  int layers = 0;      // m_f + 1
  int soc_levels = 0;  // m_beta + 1
  long long states = 0;
  long long travel_relaxations = 0;
  long long charge_pairs = 0;
  long long wait_queries = 0;
};

// Minimum arrival times at stations and the destination for every budget
// index r in [0, m_f] and SoC index. Arrival labels are split from
// departure labels (after waiting and charging) so that each layer expands
// only states it improved.
class SigmaTable {
 public:
  enum class Via { kNone, kStart, kInherited, kTravel, kCharge };

  struct Arrival {
    Hours time = kInf;
    Via via = Via::kNone;
    int from_hub = -1;  // kTravel: departure hub
    int from_i = -1;    // kTravel: departure SoC index
  };

  struct Departure {
    Hours time = kInf;
    Via via = Via::kNone;
    int from_r = -1;  // kCharge: arrival layer
    int from_i = -1;  // kCharge: arrival SoC index
    Hours t_w = 0.0;
    Hours t_c = 0.0;
  };

  // Hop ending at an arrival label, in the form (u, i_u, f, i_c, t_w, t_c):
  // charge i_c grid units at u starting from SoC index i_u under budget
  // index f, then travel.
  struct Hop {
    NodeIndex u = -1;
    int r_u = 0;
    int i_u = 0;
    int f = 0;
    int i_c = 0;
    Hours t_w = 0.0;
    Hours t_c = 0.0;
    int i_depart = 0;
    bool start = false;  // departure from the source without charging
  };

  SigmaTable(const Instance& instance, const GridParams& grids);

  int num_hubs() const { return static_cast<int>(hub_nodes_.size()); }
  NodeIndex hub_node(int h) const { return hub_nodes_[h]; }
  // -1 for nodes that are neither a station, the source nor the destination.
  int hub_of(NodeIndex v) const { return hub_of_[v]; }
  int m_f() const { return m_f_; }
  int width() const { return width_; }

  const Arrival& arrival(NodeIndex v, int r, int i) const;
  const Departure& departure(NodeIndex u, int r, int i) const;
  Hours sigma(NodeIndex v, int r, int i) const { return arrival(v, r, i).time; }

  // Resolves inheritance and returns the hop that produced the label, or
  // nullopt for unreachable labels and the initial state.
  std::optional<Hop> hop(NodeIndex v, int r, int i) const;

  const SigmaStats& stats() const { return stats_; }

 private:
  friend SigmaTable compute_sigma(const Instance&, const GridParams&,
                                  const PsiTable&);

  size_t Index(int h, int r, int i) const {
    return (static_cast<size_t>(h) * (m_f_ + 1) + r) * width_ + i;
  }

  std::vector<NodeIndex> hub_nodes_;
  std::vector<int> hub_of_;
  int m_f_ = 0;
  int width_ = 0;
  std::vector<Arrival> arrivals_;
  std::vector<Departure> departures_;
  SigmaStats stats_;
};

SigmaTable compute_sigma(const Instance& instance, const GridParams& grids,
                         const PsiTable& psi);

struct Recovered {
  SolutionProfile profile;
  int r_star = 0;
  int i_star = 0;
};

// Finds the smallest budget index whose destination label meets the
// deadline and rebuilds the plan. The plan is checked at working capacity
// beta0_hat from initial SoC beta0_hat; a failed check throws kInternal.
std::optional<Recovered> recover_solution(const Instance& instance,
                                          const GridParams& grids,
                                          const PsiTable& psi,
                                          const SigmaTable& sigma);

}  // namespace cfo
