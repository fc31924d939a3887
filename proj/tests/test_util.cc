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

#include "test_util.h"

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "cfo/instance_io.h"

namespace cfo::testing {

std::string FixturePath(const std::string& name) {
  return std::string(CFO_FIXTURE_DIR) + "/" + name;
}

std::string CliPath() { return CFO_CLI_PATH; }

std::string ScratchDir(const std::string& tag) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() /
                       ("cfo_" + tag + "_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir.string();
}

namespace {

std::string Slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

CommandResult RunCli(const std::string& args, const std::string& scratch) {
  const std::string out = scratch + "/stdout.txt";
  const std::string err = scratch + "/stderr.txt";
  const std::string cmd =
      "'" + CliPath() + "' " + args + " >'" + out + "' 2>'" + err + "'";
  const int status = std::system(cmd.c_str());
  CommandResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = Slurp(out);
  r.err = Slurp(err);
  return r;
}

Instance AlignedInstance(uint64_t seed) {
  GenOptions options;
  options.seed = seed;
  options.aligned = true;
  return generate_instance(options);
}

ChargingStation LinearStation(NodeIndex node, Kwh capacity, double rate_kw,
                              PiecewiseFn pi, Hours tw_lb, Hours tw_ub,
                              double eta) {
  ChargingStation st;
  st.node = node;
  st.phi = PiecewiseFn({{0.0, 0.0}, {capacity / rate_kw, capacity}},
                       Shape::kNonDecreasingConcave);
  st.pi = std::move(pi);
  st.tw_lb = tw_lb;
  st.tw_ub = tw_ub;
  st.tc_ub = capacity / rate_kw;
  st.eta = eta;
  return st;
}

Instance ThreeNodeLine(Kwh capacity, Kwh c01, Kwh c12, PiecewiseFn pi,
                       Hours deadline, double rate_kw, double eta) {
  std::vector<Edge> edges(2);
  edges[0].tail = 0;
  edges[0].head = 1;
  edges[1].tail = 1;
  edges[1].head = 2;
  for (Edge& e : edges) {
    e.t_lb = 1.0;
    e.t_ub = 1.0;
  }
  edges[0].energy = PiecewiseFn::Constant(c01, 1.0, 1.0);
  edges[1].energy = PiecewiseFn::Constant(c12, 1.0, 1.0);
  std::vector<ChargingStation> stations = {
      LinearStation(1, capacity, rate_kw, std::move(pi), 0.0, deadline, eta)};
  return Instance({0, 1, 2}, {NodeKind::kRoad, NodeKind::kCharging, NodeKind::kRoad},
                  std::move(edges), std::move(stations), 0, 2, deadline,
                  capacity);
}

Instance MicroInstance(uint64_t seed) {
  Rng rng(seed);
  const int n = rng.Int(3, 5);
  const int k = rng.Int(0, std::min(2, n - 2));
  const int grid_n = n + k + 1;
  // eps_beta = 3 gives a step of 12 kWh and at most 11 levels.
  const Kwh capacity = 4.0 * grid_n;
  std::set<std::pair<int, int>> used;
  std::vector<Edge> edges;
  auto add = [&](int a, int b) {
    if (a == b || used.count({a, b})) return;
    used.insert({a, b});
    Edge e;
    e.tail = a;
    e.head = b;
    e.t_lb = 0.5 * rng.Int(1, 3);
    if (rng.Coin(0.5)) {
      e.t_ub = e.t_lb;
      e.energy = PiecewiseFn::Constant(rng.Int(-15, 40), e.t_lb, e.t_ub);
    } else {
      e.t_ub = e.t_lb + 0.5 * rng.Int(1, 2);
      const double hi = rng.Int(-8, 40);
      const double lo = hi - std::ldexp(1.0, rng.Int(3, 5));
      e.energy = PiecewiseFn({{e.t_lb, hi}, {e.t_ub, lo}}, Shape::kNonIncreasing);
    }
    edges.push_back(std::move(e));
  };
  for (int v = 0; v + 1 < n; ++v) add(v, v + 1);
  const int extra = rng.Int(1, 4);
  for (int j = 0; j < extra; ++j) add(rng.Int(0, n - 1), rng.Int(0, n - 1));

  std::vector<long long> ids(n);
  std::vector<NodeKind> kinds(n, NodeKind::kRoad);
  for (int v = 0; v < n; ++v) ids[v] = v;
  std::vector<ChargingStation> stations;
  for (int j = 0; j < k; ++j) {
    const NodeIndex v = 1 + j;
    kinds[v] = NodeKind::kCharging;
    stations.push_back(LinearStation(v, capacity, 4.0 * capacity,
                                     PiecewiseFn::Constant(0.5, 0.0, 100.0),
                                     0.0, 10.0));
  }
  return Instance(std::move(ids), std::move(kinds), std::move(edges),
                  std::move(stations), 0, n - 1, 50.0, capacity);
}

std::map<std::pair<NodeIndex, int>, Hours> EnumerateTravel(
    const Instance& instance, Kwh delta_beta, int cap, NodeIndex u, int i_u) {
  struct Move {
    NodeIndex head;
    int ic;
    Hours time;
  };
  // Grid consumptions per edge, from the curve's end points directly.
  std::vector<std::vector<Move>> moves(instance.num_nodes());
  for (const Edge& e : instance.edges()) {
    const auto& pts = e.energy.points();
    const double c_ub = pts.front().y;
    const double c_lb = pts.back().y;
    const int lo = static_cast<int>(std::floor(c_lb / delta_beta));
    const int hi = static_cast<int>(std::ceil(c_ub / delta_beta));
    for (int ic = lo; ic <= hi; ++ic) {
      const double c = ic * delta_beta;
      Hours t;
      if (c >= c_ub) {
        t = e.t_lb;
      } else if (c < c_lb) {
        continue;
      } else {
        t = e.t_lb + (c_ub - c) / (c_ub - c_lb) * (e.t_ub - e.t_lb);
      }
      moves[e.tail].push_back({e.head, ic, t});
    }
  }
  std::map<std::pair<NodeIndex, int>, Hours> best;
  std::function<void(NodeIndex, int, Hours)> visit = [&](NodeIndex v, int i,
                                                         Hours t) {
    auto it = best.find({v, i});
    if (it != best.end() && it->second <= t) return;
    best[{v, i}] = t;
    for (const Move& m : moves[v]) {
      const int next = i - m.ic;
      if (next < 0) continue;
      visit(m.head, std::min(next, cap), t + m.time);
    }
  };
  visit(u, i_u, 0.0);
  return best;
}

}  // namespace cfo::testing
