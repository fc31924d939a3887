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

#include "cfo/generate.h"

#include <queue>
#include <set>
#include <utility>
#include <vector>

namespace cfo {

int Rng::Int(int lo, int hi) {
  if (hi < lo) throw Error(ErrorKind::kArgument, "empty integer range");
  const uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(Next() % span);
}

double Rng::Real(double lo, double hi) {
  const double unit = static_cast<double>(Next() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * unit;
}

const char* ToString(Profile profile) {
  switch (profile) {
    case Profile::kLine: return "line";
    case Profile::kGrid: return "grid";
    case Profile::kCorridor: return "corridor";
  }
  return "unknown";
}

Profile ParseProfile(const std::string& name) {
  if (name == "line") return Profile::kLine;
  if (name == "grid") return Profile::kGrid;
  if (name == "corridor") return Profile::kCorridor;
  throw Error(ErrorKind::kArgument, "unknown profile \"" + name + "\"");
}

namespace {

double Round(double x, double step) { return std::round(x / step) * step; }

struct Arc {
  NodeIndex tail;
  NodeIndex head;
};

// Fastest travel time from `source` to `dest` ignoring energy.
Hours FastestTime(int n, const std::vector<Arc>& arcs,
                  const std::vector<Hours>& t_lb, NodeIndex source,
                  NodeIndex dest) {
  std::vector<Hours> dist(n, kInf);
  using Item = std::pair<Hours, NodeIndex>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  dist[source] = 0.0;
  heap.push({0.0, source});
  while (!heap.empty()) {
    const auto [d, v] = heap.top();
    heap.pop();
    if (d > dist[v]) continue;
    for (size_t k = 0; k < arcs.size(); ++k) {
      if (arcs[k].tail != v) continue;
      const Hours nd = d + t_lb[k];
      if (nd < dist[arcs[k].head]) {
        dist[arcs[k].head] = nd;
        heap.push({nd, arcs[k].head});
      }
    }
  }
  return dist[dest];
}

// Random arcs: a path 0 -> 1 -> ... -> n-1 (line) or a rows x cols lattice
// (grid), then extra arcs up to `max_edges`.
std::vector<Arc> Topology(Rng& rng, Profile profile, int n, int max_edges,
                          int max_span) {
  std::vector<Arc> arcs;
  std::set<std::pair<int, int>> used;
  auto add = [&](int a, int b) {
    if (a == b || used.count({a, b})) return;
    used.insert({a, b});
    arcs.push_back({a, b});
  };
  if (profile == Profile::kGrid) {
    const int cols = n >= 6 ? 3 : 2;
    const int rows = (n + cols - 1) / cols;
    for (int v = 0; v < n; ++v) {
      const int r = v / cols;
      const int c = v % cols;
      if (c + 1 < cols && v + 1 < n) add(v, v + 1);
      if (r + 1 < rows && v + cols < n) add(v, v + cols);
    }
    if (static_cast<int>(arcs.size()) > max_edges) arcs.resize(max_edges);
    // Keep the destination reachable.
    if (!used.count({n - 2, n - 1})) add(n - 2, n - 1);
  } else {
    for (int v = 0; v + 1 < n; ++v) add(v, v + 1);
  }
  int attempts = 0;
  while (static_cast<int>(arcs.size()) < max_edges && attempts++ < 100) {
    const int a = rng.Int(0, n - 2);
    const int b = rng.Int(1, n - 1);
    if (std::abs(b - a) <= max_span && rng.Coin(0.5)) add(a, b);
  }
  return arcs;
}

Instance Assemble(int n, const std::vector<Arc>& arcs, std::vector<Edge> edges,
                  std::vector<ChargingStation> stations, Hours deadline,
                  Kwh capacity) {
  std::vector<long long> ids(n);
  std::vector<NodeKind> kinds(n, NodeKind::kRoad);
  for (int v = 0; v < n; ++v) ids[v] = v;
  for (const ChargingStation& st : stations) kinds[st.node] = NodeKind::kCharging;
  for (size_t k = 0; k < arcs.size(); ++k) {
    edges[k].tail = arcs[k].tail;
    edges[k].head = arcs[k].head;
  }
  return Instance(std::move(ids), std::move(kinds), std::move(edges),
                  std::move(stations), 0, n - 1, deadline, capacity);
}

std::vector<NodeIndex> PickStations(Rng& rng, int n, int count) {
  std::vector<NodeIndex> interior;
  for (int v = 1; v + 1 < n; ++v) interior.push_back(v);
  std::vector<NodeIndex> out;
  for (int k = 0; k < count && !interior.empty(); ++k) {
    const int j = rng.Int(0, static_cast<int>(interior.size()) - 1);
    out.push_back(interior[j]);
    interior.erase(interior.begin() + j);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Instance GenerateAligned(const GenOptions& o, Rng& rng) {
  const int n = o.nodes > 0 ? o.nodes : rng.Int(3, 6);
  if (n < 3 || n > 6) {
    throw Error(ErrorKind::kArgument, "aligned instances need 3 to 6 nodes");
  }
  const int k = std::min(o.stations >= 0 ? o.stations : rng.Int(1, 2), n - 2);
  if (k < 0 || k > 2) {
    throw Error(ErrorKind::kArgument, "aligned instances take at most 2 stations");
  }
  const Kwh q = kAlignedChargeStep;
  const int max_edges = std::clamp(o.max_edges, n - 1, 9);
  const std::vector<Arc> arcs =
      Topology(rng, o.profile, n, rng.Int(n - 1, max_edges), 2);
  const int grid_n = n + k + 1;
  // SoC grid step is exactly q at eps_beta = 0.25.
  const Kwh capacity = 4.0 * grid_n * q;

  std::vector<Edge> edges;
  std::vector<Hours> t_lb;
  for (size_t e = 0; e < arcs.size(); ++e) {
    Edge edge;
    edge.t_lb = 0.5 * rng.Int(1, 4);
    edge.t_ub = edge.t_lb + 0.5 * rng.Int(0, 2);
    // Forward arcs cost 1.1B to 1.7B per n - 1 hops spanned, so the trip
    // needs a charge.
    const int full = static_cast<int>(capacity / q);
    const int span = arcs[e].head - arcs[e].tail;
    int units = span > 0 ? static_cast<int>(std::lround(
                               full * rng.Real(1.1, 1.7) * span / (n - 1)))
                         : rng.Int(full / 3, full * 9 / 10);
    if (rng.Coin(0.1)) units = -rng.Int(0, 1);
    const Kwh c = units * q;
    edge.energy = edge.t_ub > edge.t_lb
                      ? PiecewiseFn({{edge.t_lb, c}, {edge.t_ub, c}},
                                    Shape::kNonIncreasing)
                      : PiecewiseFn({{edge.t_lb, c}}, Shape::kNonIncreasing);
    t_lb.push_back(edge.t_lb);
    edges.push_back(std::move(edge));
  }
  const Hours fastest = FastestTime(n, arcs, t_lb, 0, n - 1);
  // Slack of one to six hours leaves room to charge.
  const Hours deadline = Round(fastest * rng.Real(1.0, 1.4), 0.5) + 0.5 * rng.Int(2, 12);

  const double rate = 4.0 * q;  // one charge step per quarter hour
  std::vector<ChargingStation> stations;
  for (NodeIndex v : PickStations(rng, n, k)) {
    ChargingStation st;
    st.node = v;
    st.phi = PiecewiseFn({{0.0, 0.0}, {capacity / rate, capacity}},
                         Shape::kNonDecreasingConcave);
    st.tw_lb = 0.5 * rng.Int(0, 1);
    st.tw_ub = std::max(st.tw_lb, deadline);
    st.tc_ub = rng.Coin(0.7) ? capacity / rate : 0.25 * rng.Int(1, static_cast<int>(capacity / q));
    const double etas[] = {1.0, 0.9, 0.8};
    st.eta = etas[rng.Int(0, 2)];
    const int horizon = static_cast<int>(std::ceil(deadline + st.tw_ub)) + 1;
    std::vector<Breakpoint> points;
    double level = 0.1 * rng.Int(2, 10);
    points.push_back({0.0, level});
    for (int h = 2; h <= horizon; h += 2) {
      const double next = 0.1 * rng.Int(2, 10);
      points.push_back({static_cast<double>(h), level});
      if (next != level && h < horizon) points.push_back({static_cast<double>(h), next});
      level = next;
    }
    if (points.back().x < horizon) points.push_back({static_cast<double>(horizon), level});
    st.pi = PiecewiseFn(std::move(points));
    stations.push_back(std::move(st));
  }
  return Assemble(n, arcs, std::move(edges), std::move(stations), deadline,
                  capacity);
}

// Energy over time for a segment of `km` kilometres: three speeds from 60 to
// 100 km/h, consumption rising with the square of speed.
PiecewiseFn SpeedCurve(double km, double base, double drag) {
  std::vector<Breakpoint> points;
  for (double speed : {100.0, 80.0, 60.0}) {
    const double kwh_per_km = base + drag * speed * speed;
    points.push_back({km / speed, km * kwh_per_km});
  }
  return PiecewiseFn(std::move(points), Shape::kNonIncreasing);
}

PiecewiseFn TwoRateCharger(Kwh capacity, double fast_kw, double slow_kw,
                           double knee) {
  const Kwh at_knee = knee * capacity;
  const Hours t_knee = at_knee / fast_kw;
  return PiecewiseFn({{0.0, 0.0},
                      {t_knee, at_knee},
                      {t_knee + (capacity - at_knee) / slow_kw, capacity}},
                     Shape::kNonDecreasingConcave);
}

Instance GenerateLine(const GenOptions& o, Rng& rng) {
  const int n = o.nodes > 0 ? o.nodes : rng.Int(4, 8);
  if (n < 3 || n > 40) {
    throw Error(ErrorKind::kArgument, "line and grid instances take 3 to 40 nodes");
  }
  const int k = std::min(o.stations >= 0 ? o.stations : rng.Int(1, 3), n - 2);
  const std::vector<Arc> arcs =
      Topology(rng, o.profile, n, n - 1 + rng.Int(0, n), n);
  const Kwh capacity = 100.0 * rng.Int(1, 3);
  std::vector<Edge> edges;
  std::vector<Hours> t_lb;
  for (size_t e = 0; e < arcs.size(); ++e) {
    Edge edge;
    const double km = Round(rng.Real(30.0, 90.0), 1.0);
    edge.energy = SpeedCurve(km, rng.Real(0.6, 1.0), 0.00008);
    edge.t_lb = edge.energy.domain_lo();
    edge.t_ub = edge.energy.domain_hi();
    t_lb.push_back(edge.t_lb);
    edges.push_back(std::move(edge));
  }
  const Hours fastest = FastestTime(n, arcs, t_lb, 0, n - 1);
  const Hours deadline = Round(fastest * rng.Real(1.3, 2.2) + 1.0, 0.5);
  std::vector<ChargingStation> stations;
  for (NodeIndex v : PickStations(rng, n, k)) {
    ChargingStation st;
    st.node = v;
    st.phi = TwoRateCharger(capacity, rng.Real(1.5, 2.5) * capacity,
                            0.6 * capacity, 0.8);
    st.tw_lb = 0.0;
    st.tw_ub = Round(rng.Real(1.0, 4.0), 0.5);
    st.tc_ub = st.phi.domain_hi();
    st.eta = Round(rng.Real(0.85, 1.0), 0.01);
    const int horizon = static_cast<int>(std::ceil(deadline + st.tw_ub)) + 1;
    std::vector<Breakpoint> points;
    for (int h = 0; h <= horizon; h += 2) {
      points.push_back({static_cast<double>(h), Round(rng.Real(0.3, 1.0), 0.01)});
    }
    if (points.back().x < horizon) {
      points.push_back({static_cast<double>(horizon), points.back().y});
    }
    st.pi = PiecewiseFn(std::move(points));
    stations.push_back(std::move(st));
  }
  return Assemble(n, arcs, std::move(edges), std::move(stations), deadline,
                  capacity);
}

// Hourly intensity over a day starting at 06:00: `night` outside the solar
// window, falling linearly to `noon` at hour 6.5 (12:30).
PiecewiseFn DayCurve(Rng& rng, double night, double noon) {
  std::vector<Breakpoint> points;
  for (int h = 0; h <= 24; ++h) {
    const double s = std::clamp(1.0 - std::fabs(h - 6.5) / 4.5, 0.0, 1.0);
    const double noise = 0.005 * rng.Int(-1, 1);
    points.push_back(
        {static_cast<double>(h), Round(night - (night - noon) * s + noise, 0.001)});
  }
  return PiecewiseFn(std::move(points));
}

// Twelve nodes, three stations. The main highway 0-1-2-3-4-5-11 passes the
// coal-heavy station at 2 and the mixed one at 4; a slower southern
// detour 3-6-7-8-5 reaches the solar-rich station at 7.
// Road lengths are stretched so that every route needs a charge.
constexpr double kCorridorScale = 1.3;
Instance GenerateCorridor(const GenOptions& o, Rng& rng) {
  (void)o;
  const int n = 12;
  const Kwh capacity = 300.0;
  struct Road {
    int tail;
    int head;
    double km;
    double base;
  };
  std::vector<Road> roads = {
      {0, 1, 70, 0.85},  {1, 2, 60, 0.85},  {2, 3, 65, 0.85},
      {3, 4, 60, 0.85},  {4, 5, 70, 0.85},  {5, 11, 65, 0.85},
      {0, 9, 80, 0.80},  {9, 10, 85, 0.80}, {10, 5, 90, 0.80},
      {1, 9, 30, 0.90},  {9, 1, 30, 0.90},  {2, 9, 45, 0.90},
      {10, 3, 35, 0.90}, {3, 10, 35, 0.90}, {10, 4, 50, 0.90},
      {3, 6, 30, 0.95},  {6, 7, 30, 0.95},  {7, 8, 30, 0.95},
      {8, 5, 35, 0.95},  {6, 3, 30, 0.95},  {8, 4, 40, 0.95},
      {7, 6, 30, 0.95},  {8, 7, 30, 0.95},  {4, 8, 40, 0.95},
      {2, 1, 60, 0.85},  {4, 3, 60, 0.85},  {5, 4, 70, 0.85},
      {10, 9, 85, 0.80}, {5, 10, 90, 0.80}, {4, 11, 120, 0.85},
  };
  std::vector<Arc> arcs;
  std::vector<Edge> edges;
  for (const Road& road : roads) {
    const double km = Round(kCorridorScale * road.km * rng.Real(0.97, 1.03), 0.1);
    Edge edge;
    edge.energy = SpeedCurve(km, road.base, 0.00008);
    edge.t_lb = edge.energy.domain_lo();
    edge.t_ub = edge.energy.domain_hi();
    arcs.push_back({road.tail, road.head});
    edges.push_back(std::move(edge));
  }
  const Hours deadline = 12.0;
  struct Site {
    NodeIndex node;
    double night;
    double noon;
    double eta;
  };
  const Site sites[] = {{2, 1.02, 0.85, 0.92}, {4, 0.91, 0.55, 0.92},
                        {7, 0.90, 0.30, 0.92}};
  std::vector<ChargingStation> stations;
  for (const Site& site : sites) {
    ChargingStation st;
    st.node = site.node;
    st.phi = TwoRateCharger(capacity, 240.0, 90.0, 0.8);
    st.pi = DayCurve(rng, site.night, site.noon);
    st.tw_lb = 0.0;
    st.tw_ub = 4.0;
    st.tc_ub = 2.0;
    st.eta = site.eta;
    stations.push_back(std::move(st));
  }
  return Assemble(n, arcs, std::move(edges), std::move(stations), deadline,
                  capacity);
}

}  // namespace

Instance generate_instance(const GenOptions& options) {
  Rng rng(options.seed);
  if (options.profile == Profile::kCorridor) {
    if (options.aligned) {
      throw Error(ErrorKind::kArgument, "the corridor profile is never aligned");
    }
    return GenerateCorridor(options, rng);
  }
  if (options.aligned) return GenerateAligned(options, rng);
  return GenerateLine(options, rng);
}

}  // namespace cfo
