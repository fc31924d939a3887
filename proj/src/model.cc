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

#include "cfo/model.h"

#include <map>
#include <sstream>
#include <utility>

namespace cfo {
namespace {

[[noreturn]] void Fail(const std::string& message) {
  throw Error(ErrorKind::kValidation, message);
}

std::string EdgeName(const Instance& instance, EdgeIndex e) {
  std::ostringstream out;
  const Edge& edge = instance.edge(e);
  out << "edge " << e << " (" << instance.node_id(edge.tail) << "->"
      << instance.node_id(edge.head) << ")";
  return out.str();
}

}  // namespace

const char* ToString(NodeKind kind) {
  return kind == NodeKind::kRoad ? "road" : "charging";
}

const char* ToString(Constraint c) {
  switch (c) {
    case Constraint::kStructure: return "structure";
    case Constraint::kBounds: return "bounds";
    case Constraint::kInitialSoc: return "initial-soc";
    case Constraint::kNonNegativity: return "non-negativity";
    case Constraint::kDeadline: return "deadline";
  }
  return "unknown";
}

Instance::Instance(std::vector<long long> node_ids, std::vector<NodeKind> kinds,
                   std::vector<Edge> edges,
                   std::vector<ChargingStation> stations, NodeIndex source,
                   NodeIndex dest, Hours deadline, Kwh capacity)
    : node_ids_(std::move(node_ids)),
      kinds_(std::move(kinds)),
      edges_(std::move(edges)),
      stations_(std::move(stations)),
      source_(source),
      dest_(dest),
      deadline_(deadline),
      capacity_(capacity) {
  if (node_ids_.size() != kinds_.size()) {
    Fail("node id and kind lists differ in length");
  }
  BuildIndex();
  Validate();
}

void Instance::BuildIndex() {
  const int n = num_nodes();
  station_of_.assign(n, -1);
  out_edges_.assign(n, {});
  station_nodes_.clear();
  std::sort(stations_.begin(), stations_.end(),
            [](const ChargingStation& a, const ChargingStation& b) {
              return a.node < b.node;
            });
  for (int k = 0; k < num_stations(); ++k) {
    const NodeIndex v = stations_[k].node;
    if (v < 0 || v >= n) Fail("station on unknown node index");
    if (station_of_[v] >= 0) {
      Fail("two stations on node " + std::to_string(node_ids_[v]));
    }
    station_of_[v] = k;
    station_nodes_.push_back(v);
  }
  for (EdgeIndex e = 0; e < num_edges(); ++e) {
    const Edge& edge = edges_[e];
    if (edge.tail < 0 || edge.tail >= n || edge.head < 0 || edge.head >= n) {
      Fail("edge " + std::to_string(e) + " has an unknown endpoint");
    }
    out_edges_[edge.tail].push_back(e);
  }
}

NodeIndex Instance::index_of(long long id) const {
  for (NodeIndex v = 0; v < num_nodes(); ++v) {
    if (node_ids_[v] == id) return v;
  }
  throw Error(ErrorKind::kStructural, "unknown node id " + std::to_string(id));
}

const ChargingStation& Instance::station_at(NodeIndex v) const {
  if (v < 0 || v >= num_nodes() || station_of_[v] < 0) {
    throw Error(ErrorKind::kStructural,
                "node index " + std::to_string(v) + " is not a charging node");
  }
  return stations_[station_of_[v]];
}

void Instance::Validate() const {
  const int n = num_nodes();
  if (n == 0) Fail("instance has no nodes");
  {
    std::map<long long, int> seen;
    for (NodeIndex v = 0; v < n; ++v) {
      if (!seen.emplace(node_ids_[v], v).second) {
        Fail("duplicate node id " + std::to_string(node_ids_[v]));
      }
    }
  }
  if (source_ < 0 || source_ >= n) Fail("source is not a node");
  if (dest_ < 0 || dest_ >= n) Fail("destination is not a node");
  if (!(capacity_ > 0.0) || !std::isfinite(capacity_)) {
    Fail("capacity must be positive");
  }
  if (!(deadline_ >= 0.0) || !std::isfinite(deadline_)) {
    Fail("deadline must be non-negative");
  }
  for (NodeIndex v = 0; v < n; ++v) {
    const bool charging = kinds_[v] == NodeKind::kCharging;
    if (charging != (station_of_[v] >= 0)) {
      Fail("node " + std::to_string(node_ids_[v]) +
           (charging ? " is a charging node without a station"
                     : " has a station but is a road node"));
    }
  }
  for (EdgeIndex e = 0; e < num_edges(); ++e) {
    const Edge& edge = edges_[e];
    const std::string name = EdgeName(*this, e);
    if (edge.tail == edge.head) Fail(name + " is a self-loop");
    if (!(edge.t_lb > 0.0)) Fail(name + " needs t_lb > 0");
    if (!(edge.t_lb <= edge.t_ub) || !std::isfinite(edge.t_ub)) {
      Fail(name + " has t_lb > t_ub");
    }
    if (edge.energy.empty()) Fail(name + " has no energy curve");
    if (std::fabs(edge.energy.domain_lo() - edge.t_lb) > kTol ||
        std::fabs(edge.energy.domain_hi() - edge.t_ub) > kTol) {
      Fail(name + " energy domain differs from [t_lb, t_ub]");
    }
    for (int k = 0; k < edge.energy.num_pieces(); ++k) {
      const Piece p = edge.energy.piece(k);
      if (p.x_hi == p.x_lo && p.y_hi != p.y_lo) {
        Fail(name + " energy curve has a jump");
      }
      if (p.y_hi > p.y_lo) Fail(name + " energy curve increases");
    }
  }
  for (const ChargingStation& st : stations_) {
    const std::string name =
        "station at node " + std::to_string(node_ids_[st.node]);
    const PiecewiseFn& phi = st.phi;
    if (phi.empty() || phi.num_pieces() < 1 || phi.points().size() < 2) {
      Fail(name + " needs a charging curve with two breakpoints");
    }
    if (phi.domain_lo() != 0.0 || phi.points().front().y != 0.0) {
      Fail(name + " charging curve must start at (0, 0)");
    }
    double previous_slope = kInf;
    for (int k = 0; k < phi.num_pieces(); ++k) {
      const Piece p = phi.piece(k);
      if (!(p.x_hi > p.x_lo) || !(p.y_hi > p.y_lo)) {
        Fail(name + " charging curve is not strictly increasing");
      }
      const double slope = p.slope();
      if (slope > previous_slope * (1.0 + 1e-12) + 1e-12) {
        Fail(name + " charging curve is not concave");
      }
      previous_slope = slope;
    }
    if (std::fabs(st.capacity() - capacity_) > kTol) {
      std::ostringstream msg;
      msg << name << " charging curve tops out at " << st.capacity()
          << " kWh but the capacity is " << capacity_;
      Fail(msg.str());
    }
    if (st.pi.empty()) Fail(name + " has no intensity profile");
    if (st.pi.min_value() < 0.0) Fail(name + " has negative intensity");
    if (!(0.0 <= st.tw_lb && st.tw_lb <= st.tw_ub) ||
        !std::isfinite(st.tw_ub)) {
      Fail(name + " needs 0 <= tw_lb <= tw_ub");
    }
    if (!(st.tc_ub >= 0.0) || !std::isfinite(st.tc_ub)) {
      Fail(name + " needs tc_ub >= 0");
    }
    if (!(st.eta > 0.0 && st.eta <= 1.0)) Fail(name + " needs eta in (0, 1]");
    if (st.pi.domain_lo() > 0.0 ||
        st.pi.domain_hi() < deadline_ + st.tw_ub - kTol) {
      std::ostringstream msg;
      msg << name << " intensity covers [" << st.pi.domain_lo() << ", "
          << st.pi.domain_hi() << "] but must cover [0, "
          << deadline_ + st.tw_ub << "]";
      Fail(msg.str());
    }
  }
}

Instance Instance::with_capacity(Kwh capacity) const {
  if (!(capacity > 0.0) || capacity > capacity_ + kTol) {
    throw Error(ErrorKind::kArgument,
                "capacity can only shrink to a positive value");
  }
  Instance out = *this;
  out.capacity_ = capacity;
  for (ChargingStation& st : out.stations_) {
    const Hours cut = st.phi.InverseIncreasing(capacity);
    std::vector<Breakpoint> points;
    for (const Breakpoint& p : st.phi.points()) {
      if (p.x < cut && p.y < capacity) points.push_back(p);
    }
    points.push_back({cut, capacity});
    st.phi = PiecewiseFn(std::move(points), Shape::kNonDecreasingConcave);
  }
  out.Validate();
  return out;
}

Instance Instance::with_deadline(Hours deadline) const {
  Instance out = *this;
  out.deadline_ = deadline;
  out.Validate();
  return out;
}

Instance Instance::with_unit_intensity() const {
  Instance out = *this;
  for (ChargingStation& st : out.stations_) {
    st.pi = PiecewiseFn::Constant(1.0, st.pi.domain_lo(), st.pi.domain_hi());
    st.eta = 1.0;
  }
  return out;
}

Kwh phi(const ChargingStation& st, Hours t_c, Kwh beta) {
  const Kwh cap = st.capacity();
  if (beta > cap + kTol || beta < -kTol) {
    std::ostringstream msg;
    msg << "SoC " << beta << " outside [0, " << cap << "]";
    throw Error(ErrorKind::kInvariant, msg.str());
  }
  if (t_c < 0.0) throw Error(ErrorKind::kInvariant, "negative charge time");
  if (t_c == 0.0) return 0.0;
  beta = std::clamp(beta, 0.0, cap);
  const Hours start = st.phi.InverseIncreasing(beta);
  const Hours end = std::min(start + t_c, st.full_charge_time());
  return std::max(0.0, st.phi(end) - beta);
}

Hours charge_time(const ChargingStation& st, Kwh beta_from, Kwh beta_to) {
  const Kwh cap = st.capacity();
  if (beta_to > cap + kTol || beta_from < -kTol) {
    std::ostringstream msg;
    msg << "SoC range [" << beta_from << ", " << beta_to << "] outside [0, "
        << cap << "]";
    throw Error(ErrorKind::kInvariant, msg.str());
  }
  if (beta_from > beta_to + kTol) {
    throw Error(ErrorKind::kInvariant, "charge target below starting SoC");
  }
  beta_from = std::clamp(beta_from, 0.0, cap);
  beta_to = std::clamp(beta_to, beta_from, cap);
  return st.phi.InverseIncreasing(beta_to) -
         st.phi.InverseIncreasing(beta_from);
}

Kwh soc_step(Kwh capacity, Kwh beta, Kwh consumed,
             std::optional<ChargeAction> charge) {
  const Kwh post = beta - consumed;
  Kwh increment = 0.0;
  if (charge && post >= 0.0 && post < charge->station->capacity()) {
    increment = phi(*charge->station, charge->t_c, post);
  }
  return std::min(capacity, post + increment);
}

Kg footprint(const ChargingStation& st, Kwh beta, Hours t_c, Hours tau) {
  if (t_c == 0.0) return 0.0;
  return st.pi(tau) * phi(st, t_c, beta) / st.eta;
}

ValidationReport validate_solution(const Instance& instance,
                                   const SolutionProfile& sol,
                                   const ValidationOptions& options) {
  const int n = static_cast<int>(sol.path.size());
  auto structural = [](const std::string& message) {
    throw Error(ErrorKind::kStructural, message);
  };
  if (n == 0) structural("empty path");
  for (NodeIndex v : sol.path) {
    if (v < 0 || v >= instance.num_nodes()) {
      structural("unknown node index " + std::to_string(v));
    }
  }
  if (static_cast<int>(sol.edges.size()) != n - 1 ||
      static_cast<int>(sol.travel.size()) != n - 1) {
    structural("path, edge and travel lists disagree in length");
  }
  for (int i = 0; i + 1 < n; ++i) {
    const EdgeIndex e = sol.edges[i];
    if (e < 0 || e >= instance.num_edges()) {
      structural("unknown edge index " + std::to_string(e));
    }
    const Edge& edge = instance.edge(e);
    if (edge.tail != sol.path[i] || edge.head != sol.path[i + 1]) {
      structural(EdgeName(instance, e) + " does not join path positions " +
                 std::to_string(i) + " and " + std::to_string(i + 1));
    }
  }
  std::vector<int> stop_at(n, -1);
  for (size_t j = 0; j < sol.stops.size(); ++j) {
    const Stop& stop = sol.stops[j];
    if (stop.index < 0 || stop.index >= n - 1) {
      structural("stop " + std::to_string(j) + " is not before the last node");
    }
    if (j > 0 && stop.index <= sol.stops[j - 1].index) {
      structural("stops are not in increasing path order");
    }
    if (!instance.is_station(sol.path[stop.index])) {
      structural("stop " + std::to_string(j) + " is at road node " +
                 std::to_string(instance.node_id(sol.path[stop.index])));
    }
    stop_at[stop.index] = static_cast<int>(j);
  }

  ValidationReport report;
  for (Constraint c : {Constraint::kStructure, Constraint::kBounds,
                       Constraint::kInitialSoc, Constraint::kNonNegativity,
                       Constraint::kDeadline}) {
    report.checks.push_back({c, true, ""});
  }
  auto violate = [&report](Constraint c, const std::string& detail) {
    ConstraintStatus& status = report.checks[static_cast<int>(c)];
    if (status.ok) {
      status.ok = false;
      status.detail = detail;
    }
    if (!report.first_violation) report.first_violation = status;
    report.ok = false;
  };

  const Kwh capacity = options.capacity.value_or(instance.capacity());
  const Kwh initial = options.initial_soc.value_or(capacity);
  SolutionProfile& out = report.evaluated;
  out.path = sol.path;
  out.edges = sol.edges;
  out.travel = sol.travel;
  out.stops = sol.stops;
  out.soc.assign(n, 0.0);
  out.arrival.assign(n, 0.0);
  out.charge_start.assign(sol.stops.size(), 0.0);
  out.stop_footprints.assign(sol.stops.size(), 0.0);

  if (initial > capacity + kTol || initial < -kTol) {
    std::ostringstream msg;
    msg << "initial SoC " << initial << " outside [0, " << capacity << "]";
    violate(Constraint::kInitialSoc, msg.str());
  }

  Kwh arrive_soc = initial;
  Hours clock = 0.0;
  Kwh max_soc = initial;
  for (int i = 0; i < n; ++i) {
    const NodeIndex v = sol.path[i];
    out.arrival[i] = clock;
    Kwh soc = arrive_soc;
    if (i > 0 && arrive_soc < -kTol) {
      std::ostringstream msg;
      msg << "SoC " << arrive_soc << " kWh on arrival at node "
          << instance.node_id(v);
      violate(Constraint::kNonNegativity, msg.str());
    }
    if (stop_at[i] >= 0) {
      const int j = stop_at[i];
      const Stop& stop = sol.stops[j];
      const ChargingStation& st = instance.station_at(v);
      const std::string where =
          " at node " + std::to_string(instance.node_id(v));
      if (stop.wait < st.tw_lb - kTol || stop.wait > st.tw_ub + kTol) {
        std::ostringstream msg;
        msg << "wait " << stop.wait << " h" << where << " outside ["
            << st.tw_lb << ", " << st.tw_ub << "]";
        violate(Constraint::kBounds, msg.str());
      }
      if (stop.charge < -kTol || stop.charge > st.tc_ub + kTol) {
        std::ostringstream msg;
        msg << "charge " << stop.charge << " h" << where << " outside [0, "
            << st.tc_ub << "]";
        violate(Constraint::kBounds, msg.str());
      }
      const Hours tau = clock + stop.wait;
      out.charge_start[j] = tau;
      const Hours t_c = std::max(0.0, stop.charge);
      if (soc >= 0.0 && soc < st.capacity() && t_c > 0.0) {
        const Kwh increment = phi(st, t_c, soc);
        if (tau < st.pi.domain_lo() - kTol ||
            tau > st.pi.domain_hi() + kTol) {
          std::ostringstream msg;
          msg << "charging" << where << " starts at " << tau
              << " h, beyond the intensity horizon";
          violate(Constraint::kDeadline, msg.str());
          out.stop_footprints[j] = kInf;
        } else {
          out.stop_footprints[j] = st.pi(tau) * increment / st.eta;
        }
        soc = std::min(capacity, soc + increment);
      }
      clock = tau + stop.charge;
    }
    out.soc[i] = soc;
    max_soc = std::max(max_soc, soc);
    if (i + 1 < n) {
      const Edge& edge = instance.edge(sol.edges[i]);
      const Hours t = sol.travel[i];
      Kwh consumed = 0.0;
      if (t < edge.t_lb - kTol || t > edge.t_ub + kTol || std::isnan(t)) {
        std::ostringstream msg;
        msg << "travel " << t << " h on " << EdgeName(instance, sol.edges[i])
            << " outside [" << edge.t_lb << ", " << edge.t_ub << "]";
        violate(Constraint::kBounds, msg.str());
        consumed = edge.energy(std::clamp(t, edge.t_lb, edge.t_ub));
      } else {
        consumed = edge.energy(std::clamp(t, edge.t_lb, edge.t_ub));
      }
      arrive_soc = soc_step(capacity, soc, consumed);
      clock += t;
    }
  }
  out.elapsed = clock;
  out.max_soc = max_soc;
  Kg total = 0.0;
  for (Kg f : out.stop_footprints) total += f;
  out.footprint = total;
  report.objective = total;
  if (clock > instance.deadline() + kTol) {
    std::ostringstream msg;
    msg << "arrival at " << clock << " h exceeds the deadline "
        << instance.deadline() << " h";
    violate(Constraint::kDeadline, msg.str());
  }
  return report;
}

}  // namespace cfo
