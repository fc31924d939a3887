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

#include "cfo/discretize.h"

#include <sstream>

namespace cfo {

GridParams make_grids(const Instance& instance, double eps_beta, double eps_f,
                      Kg omega) {
  if (!(eps_beta > 0.0) || !(eps_f > 0.0) || !std::isfinite(eps_beta) ||
      !std::isfinite(eps_f)) {
    throw Error(ErrorKind::kArgument, "precisions must be positive");
  }
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    std::ostringstream msg;
    msg << "objective guess " << omega << " must be positive";
    throw Error(ErrorKind::kArgument, msg.str());
  }
  GridParams g;
  g.eps_beta = eps_beta;
  g.eps_f = eps_f;
  g.omega = omega;
  g.n = instance.num_nodes() + instance.num_stations() + 1;
  const Kwh b = instance.capacity();
  g.delta_beta = eps_beta * b / g.n;
  g.m_beta = static_cast<int>(StableCeil(g.n / eps_beta)) + g.n;
  g.delta_f = eps_f * omega / g.n;
  g.m_f = static_cast<int>(StableCeil(g.n / eps_f)) + g.n;
  g.cap_index = static_cast<int>(StableFloor((1.0 + eps_beta) * g.n / eps_beta));
  g.full_index = static_cast<int>(StableFloor(g.n / eps_beta));
  g.beta0_hat = g.cap_index * g.delta_beta;
  return g;
}

std::pair<int, int> consumption_index_range(const Edge& edge,
                                            Kwh delta_beta) {
  return {static_cast<int>(StableFloor(edge.c_lb() / delta_beta)),
          static_cast<int>(StableCeil(edge.c_ub() / delta_beta))};
}

std::vector<Kwh> edge_consumption_grid(const Edge& edge, Kwh delta_beta) {
  const auto [lo, hi] = consumption_index_range(edge, delta_beta);
  std::vector<Kwh> out;
  for (int i = lo; i <= hi; ++i) out.push_back(i * delta_beta);
  return out;
}

Hours t_hat_index(const Edge& edge, int index, Kwh delta_beta) {
  const int top = static_cast<int>(StableCeil(edge.c_ub() / delta_beta));
  if (index == top) return edge.t_lb;
  if (index > top) return kInf;
  const Kwh c_hat = index * delta_beta;
  if (c_hat < edge.c_lb() - kTol) return kInf;
  const std::optional<double> t = edge.energy.FirstAtOrBelow(c_hat);
  return t ? *t : kInf;
}

Hours t_hat(const Edge& edge, Kwh c_hat, Kwh delta_beta) {
  const double ratio = c_hat / delta_beta;
  return t_hat_index(edge, static_cast<int>(std::llround(ratio)), delta_beta);
}

std::vector<EdgeOption> edge_options(const Edge& edge, Kwh delta_beta) {
  const auto [lo, hi] = consumption_index_range(edge, delta_beta);
  std::vector<EdgeOption> out;
  for (int i = lo; i <= hi; ++i) {
    const Hours t = t_hat_index(edge, i, delta_beta);
    if (t < kInf) out.push_back({i, t});
  }
  return out;
}

}  // namespace cfo
