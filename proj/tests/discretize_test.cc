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

#include <gtest/gtest.h>

#include "test_util.h"

namespace cfo {
namespace {

// Path 0 -> 1 -> ... -> n-1 with stations at nodes 1..k.
Instance Chain(int n, int k, Kwh capacity) {
  std::vector<long long> ids(n);
  std::vector<NodeKind> kinds(n, NodeKind::kRoad);
  std::vector<Edge> edges;
  for (int v = 0; v < n; ++v) ids[v] = 100 + v;
  for (int v = 0; v + 1 < n; ++v) {
    Edge e;
    e.tail = v;
    e.head = v + 1;
    e.t_lb = e.t_ub = 1.0;
    e.energy = PiecewiseFn::Constant(1.0, 1.0, 1.0);
    edges.push_back(e);
  }
  std::vector<ChargingStation> stations;
  for (int v = 1; v <= k; ++v) {
    kinds[v] = NodeKind::kCharging;
    stations.push_back(testing::LinearStation(
        v, capacity, capacity, PiecewiseFn::Constant(1.02, 0, 200), 0, 1));
  }
  return Instance(ids, kinds, edges, stations, 0, n - 1, 100.0, capacity);
}

Edge Sloped() {
  Edge e;
  e.tail = 0;
  e.head = 1;
  e.t_lb = 40;
  e.t_ub = 60;
  e.energy = PiecewiseFn({{40, 60}, {60, 40}}, Shape::kNonIncreasing);
  return e;
}

Edge Flat(double c) {
  Edge e;
  e.t_lb = e.t_ub = 1.0;
  e.energy = PiecewiseFn::Constant(c, 1.0, 1.0);
  return e;
}

TEST(MakeGridsTest, HighwayScale) {
  const GridParams g = make_grids(Chain(48, 11, 300), 0.1, 0.1, 612);
  EXPECT_EQ(g.n, 60);
  EXPECT_DOUBLE_EQ(g.delta_beta, 0.5);
  EXPECT_EQ(g.m_beta, 660);
  EXPECT_NEAR(g.delta_f, 1.02, 1e-12);
  EXPECT_EQ(g.m_f, 660);
  EXPECT_EQ(g.cap_index, 660);
  EXPECT_EQ(g.full_index, 600);
  EXPECT_NEAR(g.beta0_hat, 330.0, 1e-9);
}

TEST(MakeGridsTest, UnitEpsilon) {
  const Instance in = Chain(5, 2, 240);
  const GridParams g = make_grids(in, 1.0, 1.0, 10);
  EXPECT_EQ(g.n, 8);
  EXPECT_DOUBLE_EQ(g.delta_beta, 30.0);
  EXPECT_EQ(g.m_beta, 16);
  EXPECT_EQ(g.m_f, 16);
}

TEST(MakeGridsTest, InvariantsAcrossParameters) {
  for (int n : {3, 4, 7}) {
    for (double b : {97.0, 200.0, 333.3}) {
      const Instance in = Chain(n, 1, b);
      for (double eps : {1.0, 0.5, 0.3, 0.25, 0.1, 0.07}) {
        for (double omega : {0.01, 5.0, 612.0}) {
          const GridParams g = make_grids(in, eps, eps, omega);
          const int nn = n + 2;
          EXPECT_NEAR(g.delta_beta, eps * b / nn, 1e-12);
          EXPECT_GE(g.m_beta * g.delta_beta, (1 + eps) * b - 1e-9);
          EXPECT_GE(g.m_f * g.delta_f, (1 + eps) * omega - 1e-9);
          EXPECT_LE(g.beta0_hat, (1 + eps) * b + 1e-9);
          EXPECT_GT(g.beta0_hat + g.delta_beta, (1 + eps) * b);
          EXPECT_LE(g.full_index * g.delta_beta, b + 1e-9);
          EXPECT_LE(g.cap_index, g.m_beta);
        }
      }
    }
  }
}

TEST(MakeGridsTest, RejectsNonPositiveArguments) {
  const Instance in = Chain(3, 1, 100);
  EXPECT_THROW(make_grids(in, 0.0, 0.1, 1), Error);
  EXPECT_THROW(make_grids(in, 0.1, -1, 1), Error);
  EXPECT_THROW(make_grids(in, 0.1, 0.1, 0), Error);
}

TEST(THatTest, SlopedEdge) {
  const Edge e = Sloped();
  EXPECT_NEAR(t_hat(e, 45, 5), 55.0, 1e-12);
  EXPECT_DOUBLE_EQ(e.energy(t_hat(e, 45, 5)), 45.0);
  EXPECT_DOUBLE_EQ(t_hat(e, 60, 5), 40.0);
  EXPECT_EQ(t_hat(e, 30, 5), kInf);
  EXPECT_DOUBLE_EQ(t_hat(e, 40, 5), 60.0);
}

// Energy 61 with step 5 rounds up to 65, which buys the fastest time.
TEST(THatTest, TopIndexIsFastest) {
  Edge e = Sloped();
  e.energy = PiecewiseFn({{40, 61}, {60, 41}}, Shape::kNonIncreasing);
  EXPECT_DOUBLE_EQ(t_hat_index(e, 13, 5), 40.0);
  EXPECT_NEAR(t_hat_index(e, 12, 5), 41.0, 1e-12);
  EXPECT_EQ(t_hat_index(e, 14, 5), kInf);
}

TEST(ConsumptionGridTest, Examples) {
  EXPECT_EQ(edge_consumption_grid(Sloped(), 5),
            (std::vector<Kwh>{40, 45, 50, 55, 60}));
  // A constant 10 with step 3 is covered from below and above.
  EXPECT_EQ(edge_consumption_grid(Flat(10), 3), (std::vector<Kwh>{9, 12}));
  EXPECT_EQ(consumption_index_range(Flat(9), 3), std::make_pair(3, 3));
  Edge regen = Sloped();
  regen.energy = PiecewiseFn({{40, 5}, {60, -7}}, Shape::kNonIncreasing);
  EXPECT_EQ(edge_consumption_grid(regen, 5), (std::vector<Kwh>{-10, -5, 0, 5}));
}

TEST(ConsumptionGridTest, OptionsSkipUnusableIndices) {
  const auto opts = edge_options(Flat(10), 3);
  ASSERT_EQ(opts.size(), 1u);
  EXPECT_EQ(opts[0].ic, 4);
  EXPECT_DOUBLE_EQ(opts[0].time, 1.0);
}

// More consumption never costs time, and the rounded time never uses more
// energy than the grid value.
TEST(THatTest, MonotoneAndConservative) {
  Rng rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Breakpoint> pts;
    double t = rng.Real(0.2, 2), c = rng.Real(-20, 120);
    const int k = rng.Int(1, 5);
    for (int j = 0; j < k; ++j) {
      pts.push_back({t, c});
      t += rng.Real(0.05, 1);
      c -= rng.Coin(0.2) ? 0.0 : rng.Real(0, 30);
    }
    Edge e;
    e.energy = PiecewiseFn(pts, Shape::kNonIncreasing);
    e.t_lb = e.energy.domain_lo();
    e.t_ub = e.energy.domain_hi();
    const double delta = rng.Real(0.5, 12);
    const auto grid = edge_consumption_grid(e, delta);
    ASSERT_FALSE(grid.empty());
    EXPECT_GE(grid.back(), e.c_lb());
    double prev = kInf;
    for (Kwh c_hat : grid) {
      const Hours th = t_hat(e, c_hat, delta);
      EXPECT_LE(th, prev);
      prev = th;
      if (th < kInf) {
        EXPECT_LE(e.energy(th), c_hat + 1e-9);
      }
    }
  }
}

}  // namespace
}  // namespace cfo
