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

// Exhaustive reference solver for small grid-aligned instances. It shares
// only the model evaluation routines with the approximation.

#pragma once

#include <optional>
#include <string>

#include "cfo/common.h"
#include "cfo/model.h"

namespace cfo {

struct OracleConfig {
  int max_nodes = 8;
  int max_stations = 3;
  // Charge amounts are multiples of this step (kWh); 0 infers it.
  Kwh charge_step = 0.0;
  // Maximum number of edges on a path; 0 means |V| - 1 + |V_c|.
  int path_length_cap = 0;
  // Search nodes before the oracle refuses.
  long long node_budget = 10'000'000;
};

struct OracleResult {
  bool feasible = false;
  Kg opt = kInf;
  SolutionProfile profile;
  long long nodes_explored = 0;
};

// Minimum footprint with capacity B and a full initial battery. Throws
// kRefused when the instance exceeds `cfg` limits, is not grid-aligned for
// the charge step, or the search exceeds the node budget.
OracleResult oracle_opt(const Instance& instance, const OracleConfig& cfg = {});

struct Alignment {
  bool aligned = true;
  std::string witness;  // first offending element
};

// True when edge energies are constant multiples of `charge_step`, every
// intensity profile is piecewise constant and every charging curve is a
// single-rate line through multiples of `charge_step`.
Alignment is_grid_aligned(const Instance& instance, Kwh charge_step);

// Largest step in 1e-3 kWh units dividing B, every edge energy and every
// charging-curve breakpoint.
Kwh infer_charge_step(const Instance& instance);

}  // namespace cfo
