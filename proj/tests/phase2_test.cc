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


#include "cfo/phase2.h"

#include <gtest/gtest.h>

#include "cfo/discretize.h"
#include "cfo/oracle.h"
#include "cfo/phase1.h"
#include "test_util.h"

namespace cfo {
namespace {

using testing::LinearStation;
using testing::ThreeNodeLine;

ChargingStation WaitStation(PiecewiseFn pi, Hours tw_lb, Hours tw_ub) {
  return LinearStation(0, 100, 50, std::move(pi), tw_lb, tw_ub);
}

TEST(MinWaitTest, FallingIntensity) {
  const ChargingStation st =
      WaitStation(PiecewiseFn({{0, 1}, {60, 0.5}, {80, 0.5}}), 5, 60);
  const std::optional<Hours> w = min_wait_for_energy(st, 10, 20, 6);
  ASSERT_TRUE(w.has_value());
  EXPECT_NEAR(*w, 28.0, 1e-9);
  // Budget met right away.
  EXPECT_NEAR(*min_wait_for_energy(st, 10, 20, 10), 5.0, 1e-12);
  // Never cheap enough.
  EXPECT_FALSE(min_wait_for_energy(st, 10, 20, 4.9).has_value());
}

TEST(MinWaitTest, ConstantAndRising) {
  const ChargingStation flat =
      WaitStation(PiecewiseFn::Constant(0.4, 0, 100), 2, 30);
  EXPECT_DOUBLE_EQ(*min_wait_for_energy(flat, 10, 0, 4), 2.0);
  EXPECT_FALSE(min_wait_for_energy(flat, 10, 0, 3.99).has_value());

  const ChargingStation rising =
      WaitStation(PiecewiseFn({{0, 0.2}, {100, 0.8}}), 0, 50);
  EXPECT_DOUBLE_EQ(*min_wait_for_energy(rising, 10, 10, 3), 0.0);
  EXPECT_FALSE(min_wait_for_energy(rising, 10, 10, 2.59).has_value());
}

TEST(MinWaitTest, NothingToCharge) {
  const ChargingStation st =
      WaitStation(PiecewiseFn::Constant(0.4, 0, 100), 1.5, 30);
  EXPECT_DOUBLE_EQ(*min_wait_for_energy(st, 0, 10, 0), 1.5);
  WaitQuery q;
  q.station = &st;
  q.beta_u = 100;
  q.t_c = 0.5;
  q.tau_u = 10;
  q.f_hat = 0;
  EXPECT_DOUBLE_EQ(*min_wait(q), 1.5);
}

TEST(MinWaitTest, JumpDown) {
  const ChargingStation st =
      WaitStation(PiecewiseFn({{0, 1}, {3, 1}, {3, 0.25}, {10, 0.25}}), 0, 8);
  EXPECT_DOUBLE_EQ(*min_wait_for_energy(st, 20, 1, 5), 2.0);
  EXPECT_FALSE(min_wait_for_energy(st, 20, 1, 4.9).has_value());
}

TEST(MinWaitTest, WindowOutsideProfile) {
  const ChargingStation st =
      WaitStation(PiecewiseFn::Constant(0.4, 0, 10), 0, 8);
  EXPECT_THROW(min_wait_for_energy(st, 5, 4, 10), Error);
  WaitQuery q;
  EXPECT_THROW(min_wait(q), Error);
}

TEST(MinWaitTest, MatchesScan) {
  Rng rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Breakpoint> pts;
    double x = 0.0;
    for (int k = 0; k < 5; ++k) {
      pts.push_back({x, rng.Real(0.1, 1.0)});
      x += rng.Real(0.5, 3.0);
    }
    pts.push_back({x, rng.Real(0.1, 1.0)});
    const ChargingStation st = WaitStation(PiecewiseFn(pts), 0, x);
    const double energy = rng.Real(1, 50);
    const double f_hat = rng.Real(0.1, 50);
    const std::optional<Hours> got = min_wait_for_energy(st, energy, 0, f_hat);
    std::optional<Hours> want;
    for (int k = 0; k <= 100000; ++k) {
      const double w = x * k / 100000;
      if (st.pi(w) * energy <= f_hat) {
        want = w;
        break;
      }
    }
    ASSERT_EQ(got.has_value(), want.has_value()) << trial;
    if (got) {
      EXPECT_LE(*got, *want + 1e-9);
      EXPECT_LE(st.pi(*got) * energy, f_hat + 1e-6);
    }
  }
}

struct Tables {
  GridParams grids;
  std::unique_ptr<PsiTable> psi;
  std::unique_ptr<SigmaTable> sigma;
};

Tables Build(const Instance& in, double eps_beta, double eps_f, Kg omega) {
  Tables t;
  t.grids = make_grids(in, eps_beta, eps_f, omega);
  t.psi = std::make_unique<PsiTable>(in, t.grids);
  t.sigma = std::make_unique<SigmaTable>(compute_sigma(in, t.grids, *t.psi));
  return t;
}

TEST(SigmaTest, WithoutStationsEqualsTravel) {
  for (int seed = 1; seed <= 60; ++seed) {
    const Instance in = testing::MicroInstance(seed);
    if (in.num_stations() != 0) continue;
    const Tables t = Build(in, 3.0, 0.5, 10);
    const int start = t.grids.cap_index;
    const std::vector<Hours> closed = t.psi->closed(in.source(), start, in.dest());
    for (int r = 0; r <= t.grids.m_f; ++r) {
      for (int i = 0; i <= t.grids.cap_index; ++i) {
        EXPECT_EQ(t.sigma->sigma(in.dest(), r, i),
                  t.psi->at(in.source(), start, in.dest(), i))
            << seed;
      }
    }
    const auto rec = recover_solution(in, t.grids, *t.psi, *t.sigma);
    if (closed[0] <= in.deadline()) {
      ASSERT_TRUE(rec.has_value());
      EXPECT_EQ(rec->r_star, 0);
      EXPECT_TRUE(rec->profile.stops.empty());
      EXPECT_EQ(rec->profile.footprint, 0.0);
    } else {
      EXPECT_FALSE(rec.has_value());
    }
  }
}

TEST(SigmaTest, LabelsImproveWithBudget) {
  for (int seed = 1; seed <= 40; ++seed) {
    const Instance in = testing::MicroInstance(seed);
    const Tables t = Build(in, 3.0, 0.5, 20);
    for (int h = 0; h < t.sigma->num_hubs(); ++h) {
      const NodeIndex v = t.sigma->hub_node(h);
      for (int i = 0; i <= t.grids.cap_index; ++i) {
        for (int r = 1; r <= t.grids.m_f; ++r) {
          EXPECT_LE(t.sigma->sigma(v, r, i), t.sigma->sigma(v, r - 1, i));
        }
      }
    }
  }
}

TEST(SigmaTest, StateCount) {
  const Instance in = testing::AlignedInstance(3);
  const Tables t = Build(in, 0.5, 0.5, 40);
  const SigmaStats& s = t.sigma->stats();
  EXPECT_EQ(s.hubs, in.num_stations() + 2);
  EXPECT_EQ(s.states, static_cast<long long>(s.hubs) * (t.grids.m_f + 1) *
                          (t.grids.m_beta + 1));
  EXPECT_EQ(t.sigma->hub_of(in.source()), 0);
  EXPECT_THROW(t.sigma->sigma(in.source(), t.grids.m_f + 1, 0), Error);
}

// 120 kWh battery, 60 kWh to the station, 100 kWh after it. Intensity
// drops from 1 to 0.2 at hour 2; arrival at the station is at hour 1.
Instance DropLine(Hours deadline) {
  return ThreeNodeLine(120, 60, 100,
                       PiecewiseFn({{0, 1}, {2, 1}, {2, 0.2}, {20, 0.2}}),
                       deadline);
}

TEST(RecoverTest, WaitsForCleanPower) {
  const Instance in = DropLine(5);
  const Tables t = Build(in, 0.125, 0.1, 30);
  const auto rec = recover_solution(in, t.grids, *t.psi, *t.sigma);
  ASSERT_TRUE(rec.has_value());
  const SolutionProfile& p = rec->profile;
  ASSERT_EQ(p.stops.size(), 1u);
  EXPECT_NEAR(p.stops[0].wait, 1.0, 1e-9);
  EXPECT_LE(p.footprint, 0.2 * 27 + 1e-9);
  EXPECT_LE(p.elapsed, 5.0);
}

TEST(RecoverTest, TightDeadlineChargesNow) {
  const Instance in = DropLine(2.5);
  const Tables t = Build(in, 0.125, 0.1, 30);
  const auto rec = recover_solution(in, t.grids, *t.psi, *t.sigma);
  ASSERT_TRUE(rec.has_value());
  const SolutionProfile& p = rec->profile;
  ASSERT_EQ(p.stops.size(), 1u);
  EXPECT_EQ(p.stops[0].wait, 0.0);
  EXPECT_GE(p.footprint, 25.0 - 1e-9);
  EXPECT_LE(p.footprint, 30.0 * 1.1 + 1e-9);
}

TEST(RecoverTest, DeadlineBelowFastestTrip) {
  const Instance in = DropLine(1.9);
  const Tables t = Build(in, 0.125, 0.1, 30);
  EXPECT_FALSE(recover_solution(in, t.grids, *t.psi, *t.sigma).has_value());
}

TEST(RecoverTest, BudgetTooSmall) {
  const Instance in = DropLine(2.5);
  const Tables t = Build(in, 0.125, 0.1, 10);
  EXPECT_FALSE(recover_solution(in, t.grids, *t.psi, *t.sigma).has_value());
}

TEST(RecoverTest, HopsReplayToTheStoredPlan) {
  const Instance in = DropLine(5);
  const Tables t = Build(in, 0.125, 0.1, 30);
  const auto rec = recover_solution(in, t.grids, *t.psi, *t.sigma);
  ASSERT_TRUE(rec.has_value());
  const auto hop = t.sigma->hop(in.dest(), rec->r_star, rec->i_star);
  ASSERT_TRUE(hop.has_value());
  EXPECT_EQ(hop->u, 1);
  EXPECT_FALSE(hop->start);
  EXPECT_GT(hop->i_c, 0);
  EXPECT_NEAR(hop->t_w, rec->profile.stops[0].wait, 1e-12);
  EXPECT_NEAR(hop->t_c, rec->profile.stops[0].charge, 1e-12);
}

// Every three-node line with constant intensity: the recovered plan costs
// at most OPT + eps_f * omega for omega at or above OPT.
TEST(RecoverTest, ThreeNodeLinesAgainstOracle) {
  int compared = 0;
  for (int c01 = 0; c01 <= 120; c01 += 24) {
    for (int c12 = 12; c12 <= 120; c12 += 24) {
      for (double pi : {0.3, 0.9}) {
        const Instance in =
            ThreeNodeLine(120, c01, c12, PiecewiseFn::Constant(pi, 0, 20), 6);
        const OracleResult opt = oracle_opt(in);
        const Kg omega = std::max(opt.opt, 1.0);
        const Tables t = Build(in, 0.25, 0.1, omega);
        const auto rec = recover_solution(in, t.grids, *t.psi, *t.sigma);
        if (!opt.feasible) {
          EXPECT_FALSE(rec.has_value()) << c01 << " " << c12;
          continue;
        }
        ASSERT_TRUE(rec.has_value()) << c01 << " " << c12;
        EXPECT_LE(rec->profile.footprint, opt.opt + 0.1 * omega + 1e-9);
        ++compared;
      }
    }
  }
  EXPECT_GT(compared, 10);
}

}  // namespace
}  // namespace cfo
