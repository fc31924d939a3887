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

// Domain model for carbon-aware e-truck routing: road graph, charging
// stations, and an evaluator for candidate plans.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cfo/common.h"
#include "cfo/piecewise.h"

namespace cfo {

// A directed road segment. `energy` maps travel time to consumed energy and
// is non-increasing on [t_lb, t_ub]; negative values model regeneration.
struct Edge {
  NodeIndex tail = 0;
  NodeIndex head = 0;
  Hours t_lb = 0.0;
  Hours t_ub = 0.0;
  PiecewiseFn energy;

  Kwh c_lb() const { return energy(t_ub); }
  Kwh c_ub() const { return energy(t_lb); }
};

struct ChargingStation {
  NodeIndex node = 0;
  // SoC reached after charging from empty for t hours; concave, Phi(0) = 0.
  PiecewiseFn phi;
  // Grid carbon intensity in kg/kWh over absolute time.
  PiecewiseFn pi;
  Hours tw_lb = 0.0;
  Hours tw_ub = 0.0;
  Hours tc_ub = 0.0;
  double eta = 1.0;

  Kwh capacity() const { return phi.points().back().y; }
  Hours full_charge_time() const { return phi.domain_hi(); }
};

enum class NodeKind { kRoad, kCharging };

const char* ToString(NodeKind kind);

// Immutable problem instance. Nodes are addressed by dense indices; the
// external ids from the input file are kept for reporting.
class Instance {
 public:
  Instance() = default;

  // Validates everything and throws Error(kValidation) naming the offending
  // element. `stations` must hold one record per charging node.
  Instance(std::vector<long long> node_ids, std::vector<NodeKind> kinds,
           std::vector<Edge> edges, std::vector<ChargingStation> stations,
           NodeIndex source, NodeIndex dest, Hours deadline, Kwh capacity);

  int num_nodes() const { return static_cast<int>(node_ids_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  int num_stations() const { return static_cast<int>(stations_.size()); }

  long long node_id(NodeIndex v) const { return node_ids_.at(v); }
  // Throws kStructural for an unknown id.
  NodeIndex index_of(long long id) const;
  NodeKind kind(NodeIndex v) const { return kinds_.at(v); }
  bool is_station(NodeIndex v) const { return station_of_.at(v) >= 0; }

  // Throws kStructural if `v` has no charging station.
  const ChargingStation& station_at(NodeIndex v) const;
  const std::vector<ChargingStation>& stations() const { return stations_; }
  // Charging nodes in increasing index order.
  const std::vector<NodeIndex>& station_nodes() const { return station_nodes_; }

  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(EdgeIndex e) const { return edges_.at(e); }
  const std::vector<EdgeIndex>& out_edges(NodeIndex v) const {
    return out_edges_.at(v);
  }
  const std::vector<long long>& node_ids() const { return node_ids_; }
  const std::vector<NodeKind>& kinds() const { return kinds_; }

  NodeIndex source() const { return source_; }
  NodeIndex dest() const { return dest_; }
  Hours deadline() const { return deadline_; }
  Kwh capacity() const { return capacity_; }

  // Copy with each charging curve truncated at `capacity` (< B).
  Instance with_capacity(Kwh capacity) const;
  Instance with_deadline(Hours deadline) const;
  // Copy with pi = 1 and eta = 1 at every station.
  Instance with_unit_intensity() const;

 private:
  void Validate() const;
  void BuildIndex();

  std::vector<long long> node_ids_;
  std::vector<NodeKind> kinds_;
  std::vector<Edge> edges_;
  std::vector<ChargingStation> stations_;
  NodeIndex source_ = 0;
  NodeIndex dest_ = 0;
  Hours deadline_ = 0.0;
  Kwh capacity_ = 0.0;

  std::vector<int> station_of_;
  std::vector<NodeIndex> station_nodes_;
  std::vector<std::vector<EdgeIndex>> out_edges_;
};

// SoC increment from charging `t_c` hours starting at SoC `beta`.
// Throws kInvariant if beta lies outside [0, B].
Kwh phi(const ChargingStation& st, Hours t_c, Kwh beta);

// Hours needed to charge from `beta_from` to `beta_to`.
Hours charge_time(const ChargingStation& st, Kwh beta_from, Kwh beta_to);

struct ChargeAction {
  const ChargingStation* station = nullptr;
  Hours t_c = 0.0;
};

// SoC after consuming `consumed` and then optionally charging, clipped at
// `capacity`. A negative result means the battery ran dry; no charging is
// applied in that case.
Kwh soc_step(Kwh capacity, Kwh beta, Kwh consumed,
             std::optional<ChargeAction> charge = std::nullopt);

// Carbon emitted by a charge of `t_c` hours from SoC `beta` started at `tau`.
Kg footprint(const ChargingStation& st, Kwh beta, Hours t_c, Hours tau);

struct Stop {
  int index = 0;  // position in `path`
  Hours wait = 0.0;
  Hours charge = 0.0;

  friend bool operator==(const Stop&, const Stop&) = default;
};

// A plan. `path`, `edges`, `travel` and `stops` are the decisions; the
// remaining fields are derived by Evaluate().
struct SolutionProfile {
  std::vector<NodeIndex> path;
  std::vector<EdgeIndex> edges;
  std::vector<Hours> travel;
  std::vector<Stop> stops;

  // soc[i]: SoC when leaving path[i], after any charging there.
  std::vector<Kwh> soc;
  // arrival[i]: arrival time at path[i].
  std::vector<Hours> arrival;
  std::vector<Hours> charge_start;
  std::vector<Kg> stop_footprints;
  Kg footprint = 0.0;
  Hours elapsed = 0.0;
  Kwh max_soc = 0.0;
};

enum class Constraint {
  kStructure,
  kBounds,
  kInitialSoc,
  kNonNegativity,
  kDeadline,
};

const char* ToString(Constraint c);

struct ConstraintStatus {
  Constraint constraint = Constraint::kStructure;
  bool ok = true;
  std::string detail;
};

struct ValidationOptions {
  // Working capacity; defaults to the instance capacity.
  std::optional<Kwh> capacity;
  // Initial SoC; defaults to the working capacity.
  std::optional<Kwh> initial_soc;
};

struct ValidationReport {
  bool ok = true;
  // One entry per Constraint value, in declaration order.
  std::vector<ConstraintStatus> checks;
  std::optional<ConstraintStatus> first_violation;
  Kg objective = 0.0;
  // Input decisions with all derived fields recomputed.
  SolutionProfile evaluated;
};

// Recomputes the trajectory of `sol` and checks every constraint. Throws
// kStructural for unknown nodes or edges, or edges that do not chain.
ValidationReport validate_solution(const Instance& instance,
                                   const SolutionProfile& sol,
                                   const ValidationOptions& options = {});

}  // namespace cfo
