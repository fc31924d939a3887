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

#include "cfo/oracle.h"

#include <numeric>
#include <sstream>
#include <vector>

namespace cfo {
namespace {

bool IsMultiple(double x, double step) {
  const double k = x / step;
  return std::fabs(k - std::round(k)) <= 1e-9 * std::max(1.0, std::fabs(k));
}

class Search {
 public:
  Search(const Instance& instance, const OracleConfig& cfg, Kwh step,
         int max_edges)
      : instance_(instance), cfg_(cfg), step_(step), max_edges_(max_edges) {}

  void Run() {
    path_.push_back(instance_.source());
    Visit(instance_.source(), 0.0, instance_.capacity(), 0.0);
  }

  long long nodes() const { return nodes_; }
  bool found() const { return best_ < kInf; }
  Kg best() const { return best_; }
  const SolutionProfile& best_plan() const { return best_plan_; }

 private:
  struct Choice {
    Hours wait = 0.0;
    Hours charge = 0.0;
    Kwh energy = 0.0;
    Kg footprint = 0.0;
  };

  std::vector<Choice> StopChoices(NodeIndex v, Hours tau, Kwh beta) const {
    std::vector<Choice> out;
    out.push_back({});
    if (!instance_.is_station(v) || beta < 0.0) return out;
    const ChargingStation& st = instance_.station_at(v);
    const Kwh full = std::min(instance_.capacity(), st.capacity());
    std::vector<Hours> waits = {st.tw_lb, st.tw_ub};
    for (const Breakpoint& p : st.pi.points()) {
      const Hours w = p.x - tau;
      if (w > st.tw_lb && w < st.tw_ub) waits.push_back(w);
    }
    std::sort(waits.begin(), waits.end());
    waits.erase(std::unique(waits.begin(), waits.end()), waits.end());
    for (int k = 1;; ++k) {
      const Kwh target = beta + k * step_;
      if (target > full + kTol) break;
      const Hours t_c = charge_time(st, beta, std::min(target, full));
      if (t_c > st.tc_ub + kTol) break;
      for (Hours w : waits) {
        if (tau + w + t_c > instance_.deadline() + kTol) continue;
        out.push_back({w, t_c, k * step_, footprint(st, beta, t_c, tau + w)});
      }
    }
    return out;
  }

  void Visit(NodeIndex v, Hours tau, Kwh beta, Kg f) {
    if (++nodes_ > cfg_.node_budget) {
      throw Error(ErrorKind::kRefused, "oracle search exceeded its node budget");
    }
    if (v == instance_.dest()) {
      if (f < best_) Record(f);
      return;
    }
    if (static_cast<int>(edges_.size()) >= max_edges_) return;
    const int index = static_cast<int>(path_.size()) - 1;
    for (const Choice& choice : StopChoices(v, tau, beta)) {
      const Kg f1 = f + choice.footprint;
      if (f1 >= best_) continue;
      const Hours tau1 = tau + choice.wait + choice.charge;
      const Kwh beta1 = std::min(instance_.capacity(), beta + choice.energy);
      const bool stop = choice.charge > 0.0;
      if (stop) stops_.push_back({index, choice.wait, choice.charge});
      for (EdgeIndex e : instance_.out_edges(v)) {
        const Edge& edge = instance_.edge(e);
        std::vector<Hours> times;
        for (const Breakpoint& p : edge.energy.points()) times.push_back(p.x);
        times.erase(std::unique(times.begin(), times.end()), times.end());
        for (Hours t : times) {
          const Hours tau2 = tau1 + t;
          if (tau2 > instance_.deadline() + kTol) continue;
          const Kwh beta2 = soc_step(instance_.capacity(), beta1, edge.energy(t));
          if (beta2 < -kTol) continue;
          path_.push_back(edge.head);
          edges_.push_back(e);
          travel_.push_back(t);
          Visit(edge.head, tau2, std::max(0.0, beta2), f1);
          path_.pop_back();
          edges_.pop_back();
          travel_.pop_back();
        }
      }
      if (stop) stops_.pop_back();
    }
  }

  void Record(Kg f) {
    best_ = f;
    best_plan_ = SolutionProfile{};
    best_plan_.path = path_;
    best_plan_.edges = edges_;
    best_plan_.travel = travel_;
    best_plan_.stops = stops_;
  }

  const Instance& instance_;
  const OracleConfig& cfg_;
  Kwh step_;
  int max_edges_;
  long long nodes_ = 0;
  Kg best_ = kInf;
  SolutionProfile best_plan_;
  std::vector<NodeIndex> path_;
  std::vector<EdgeIndex> edges_;
  std::vector<Hours> travel_;
  std::vector<Stop> stops_;
};

}  // namespace

Kwh infer_charge_step(const Instance& instance) {
  long long g = 0;
  auto add = [&g](double x) {
    const long long units = std::llabs(std::llround(x * 1000.0));
    if (units != 0) g = std::gcd(g, units);
  };
  add(instance.capacity());
  for (const Edge& edge : instance.edges()) {
    for (const Breakpoint& p : edge.energy.points()) add(p.y);
  }
  for (const ChargingStation& st : instance.stations()) {
    for (const Breakpoint& p : st.phi.points()) add(p.y);
  }
  return g == 0 ? instance.capacity() : g / 1000.0;
}

Alignment is_grid_aligned(const Instance& instance, Kwh charge_step) {
  Alignment out;
  auto fail = [&out](const std::string& witness) {
    if (out.aligned) {
      out.aligned = false;
      out.witness = witness;
    }
  };
  if (!(charge_step > 0.0)) {
    fail("charge step must be positive");
    return out;
  }
  if (!IsMultiple(instance.capacity(), charge_step)) {
    fail("capacity is not a multiple of the charge step");
  }
  for (EdgeIndex e = 0; e < instance.num_edges(); ++e) {
    const Edge& edge = instance.edge(e);
    const PiecewiseFn& c = edge.energy;
    if (c.min_value() != c.max_value()) {
      fail("edge " + std::to_string(e) + " energy is not constant");
    } else if (!IsMultiple(c.min_value(), charge_step)) {
      fail("edge " + std::to_string(e) +
           " energy is not a multiple of the charge step");
    }
  }
  for (const ChargingStation& st : instance.stations()) {
    const std::string name =
        "station at node " + std::to_string(instance.node_id(st.node));
    for (int k = 0; k < st.pi.num_pieces(); ++k) {
      const Piece p = st.pi.piece(k);
      if (!p.is_flat() && !p.is_jump()) {
        std::ostringstream msg;
        msg << name << " intensity piece " << k << " on [" << p.x_lo << ", "
            << p.x_hi << "] is sloped";
        fail(msg.str());
      }
    }
    const double rate = st.phi.piece(0).slope();
    for (int k = 0; k < st.phi.num_pieces(); ++k) {
      if (std::fabs(st.phi.piece(k).slope() - rate) > 1e-9 * rate) {
        fail(name + " charging curve has more than one rate");
      }
    }
    for (const Breakpoint& p : st.phi.points()) {
      if (!IsMultiple(p.y, charge_step)) {
        fail(name + " charging breakpoint off the charge step");
      }
    }
  }
  return out;
}

OracleResult oracle_opt(const Instance& instance, const OracleConfig& cfg) {
  if (instance.num_nodes() > cfg.max_nodes ||
      instance.num_stations() > cfg.max_stations) {
    std::ostringstream msg;
    msg << "instance with " << instance.num_nodes() << " nodes and "
        << instance.num_stations() << " stations exceeds the oracle limits ("
        << cfg.max_nodes << ", " << cfg.max_stations << ")";
    throw Error(ErrorKind::kRefused, msg.str());
  }
  const Kwh step =
      cfg.charge_step > 0.0 ? cfg.charge_step : infer_charge_step(instance);
  const Alignment alignment = is_grid_aligned(instance, step);
  if (!alignment.aligned) {
    throw Error(ErrorKind::kRefused,
                "instance is not grid-aligned: " + alignment.witness);
  }
  const int max_edges = cfg.path_length_cap > 0
                            ? cfg.path_length_cap
                            : instance.num_nodes() - 1 + instance.num_stations();
  Search search(instance, cfg, step, max_edges);
  search.Run();
  OracleResult result;
  result.nodes_explored = search.nodes();
  if (!search.found()) return result;
  ValidationReport report = validate_solution(instance, search.best_plan());
  if (!report.ok) {
    throw Error(ErrorKind::kInternal,
                "oracle plan fails " + report.first_violation->detail);
  }
  result.feasible = true;
  result.opt = report.objective;
  result.profile = std::move(report.evaluated);
  return result;
}

}  // namespace cfo
