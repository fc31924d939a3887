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

// Uniform SoC and footprint grids, and the rounded edge-time function.

#pragma once

#include <utility>
#include <vector>

#include "cfo/common.h"
#include "cfo/model.h"

namespace cfo {

struct GridParams {
  double eps_beta = 0.0;
  double eps_f = 0.0;
  Kg omega = 0.0;
  // |V| + |V_c| + 1.
  int n = 0;

  Kwh delta_beta = 0.0;
  int m_beta = 0;
  Kg delta_f = 0.0;
  int m_f = 0;

  // Index of the working capacity floor((1 + eps_beta) B / delta_beta); the
  // initial SoC is cap_index * delta_beta.
  int cap_index = 0;
  // Largest index not above B; charging never targets more.
  int full_index = 0;
  Kwh beta0_hat = 0.0;

  Kwh soc(int index) const { return index * delta_beta; }
  Kwh working_capacity() const { return beta0_hat; }
};

// Throws kArgument unless eps_beta, eps_f and omega are positive.
GridParams make_grids(const Instance& instance, double eps_beta, double eps_f,
                      Kg omega);

// Inclusive range of consumption indices considered for `edge`.
std::pair<int, int> consumption_index_range(const Edge& edge,
                                            Kwh delta_beta);

// Consumption values i * delta_beta over consumption_index_range().
std::vector<Kwh> edge_consumption_grid(const Edge& edge, Kwh delta_beta);

// Fastest travel time on `edge` that consumes at most index * delta_beta,
// or kInf.
Hours t_hat_index(const Edge& edge, int index, Kwh delta_beta);

// As t_hat_index() for a grid value c_hat.
Hours t_hat(const Edge& edge, Kwh c_hat, Kwh delta_beta);

struct EdgeOption {
  int ic = 0;  // consumption index
  Hours time = 0.0;
};

// Consumption indices with a finite t_hat, ascending by index.
std::vector<EdgeOption> edge_options(const Edge& edge, Kwh delta_beta);

}  // namespace cfo
