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

#include <gtest/gtest.h>

#include "cfo/generate.h"
#include "test_util.h"

namespace cfo {
namespace {

ChargingStation Station(PiecewiseFn phi, PiecewiseFn pi, double eta = 1.0) {
  ChargingStation st;
  st.node = 1;
  st.phi = std::move(phi);
  st.pi = std::move(pi);
  st.tw_lb = 0.0;
  st.tw_ub = 10.0;
  st.tc_ub = st.phi.domain_hi();
  st.eta = eta;
  return st;
}

ChargingStation LinearTwoPerHour() {
  return Station(PiecewiseFn({{0, 0}, {150, 300}}, Shape::kNonDecreasingConcave),
                 PiecewiseFn::Constant(0.5, 0, 1000));
}

TEST(PhiTest, LinearCurve) {
  const ChargingStation st = LinearTwoPerHour();
  EXPECT_DOUBLE_EQ(phi(st, 10, 100), 20.0);
  EXPECT_DOUBLE_EQ(phi(st, 5, 300), 0.0);
  EXPECT_DOUBLE_EQ(phi(st, 500, 100), 200.0);  // capped at B
  EXPECT_DOUBLE_EQ(phi(st, 0, 42), 0.0);
  EXPECT_THROW(phi(st, 1, 301), Error);
}

// Two-rate curve in minutes scaled to hours: 0.0195 B/min up to 0.8 B, then
// 0.009 B/min. From 0.67 B, twenty minutes add a quarter of the battery.
TEST(PhiTest, TwoRateCurveFromPlot) {
  const double b = 300.0;
  const double knee = 0.8 / 0.0195 / 60.0;
  const double full = knee + 0.2 / 0.009 / 60.0;
  const ChargingStation st =
      Station(PiecewiseFn({{0, 0}, {knee, 0.8 * b}, {full, b}},
                          Shape::kNonDecreasingConcave),
              PiecewiseFn::Constant(1.0, 0, 100));
  EXPECT_NEAR(phi(st, 20.0 / 60.0, 0.67 * b), 0.25 * b, 1e-9);
}

TEST(ChargeTimeTest, Examples) {
  const ChargingStation st = LinearTwoPerHour();
  EXPECT_DOUBLE_EQ(charge_time(st, 100, 140), 20.0);
  EXPECT_DOUBLE_EQ(charge_time(st, 77, 77), 0.0);
  const ChargingStation two =
      Station(PiecewiseFn({{0, 0}, {50, 150}, {200, 300}},
                          Shape::kNonDecreasingConcave),
              PiecewiseFn::Constant(1.0, 0, 1000));
  EXPECT_NEAR(charge_time(two, 120, 180), 40.0, 1e-12);
  EXPECT_NEAR(phi(two, 40.0, 120), 60.0, 1e-12);
  EXPECT_THROW(charge_time(two, 100, 301), Error);
}

TEST(ChargeTimeTest, RoundTripProperty) {
  const ChargingStation st =
      Station(PiecewiseFn({{0, 0}, {0.8, 240}, {1.467, 300}},
                          Shape::kNonDecreasingConcave),
              PiecewiseFn::Constant(1.0, 0, 100));
  for (int i = 0; i <= 60; ++i) {
    const double beta = 5.0 * i;
    for (int k = 0; k <= 30; ++k) {
      const double t_c = 0.05 * k;
      const double gain = phi(st, t_c, beta);
      EXPECT_GE(gain, 0.0);
      EXPECT_LE(beta + gain, 300.0 + 1e-9);
      const double back = charge_time(st, beta, beta + gain);
      EXPECT_LE(back, t_c + 1e-9);
      if (beta + gain < 300.0 - 1e-9) {
        EXPECT_NEAR(back, t_c, 1e-9);
      }
    }
  }
}

TEST(SocStepTest, Examples) {
  const ChargingStation st = LinearTwoPerHour();
  EXPECT_DOUBLE_EQ(soc_step(300, 300, 50), 250.0);
  EXPECT_DOUBLE_EQ(soc_step(300, 290, -20), 300.0);
  EXPECT_DOUBLE_EQ(soc_step(300, 100, 30, ChargeAction{&st, 10}), 90.0);
  EXPECT_DOUBLE_EQ(soc_step(300, 10, 30), -20.0);
  EXPECT_DOUBLE_EQ(soc_step(300, 10, 30, ChargeAction{&st, 10}), -20.0);
}

TEST(SocStepTest, NeverAboveCapacity) {
  const ChargingStation st = LinearTwoPerHour();
  Rng rng(3);
  for (int k = 0; k < 1000; ++k) {
    const double cap = rng.Real(300, 375);
    const double beta = rng.Real(0, cap);
    const double consumed = rng.Real(-100, 100);
    const double out = soc_step(cap, beta, consumed,
                                rng.Coin(0.5) ? std::optional<ChargeAction>(
                                                    ChargeAction{&st, rng.Real(0, 200)})
                                              : std::nullopt);
    EXPECT_LE(out, cap);
  }
}

TEST(FootprintTest, Examples) {
  // phi output of 20 kWh: ten hours at 2 kW from 100 kWh.
  const ChargingStation half = LinearTwoPerHour();
  EXPECT_DOUBLE_EQ(footprint(half, 100, 10, 3), 10.0);
  ChargingStation lossy = half;
  lossy.eta = 0.9;
  EXPECT_NEAR(footprint(lossy, 100, 10, 3), 11.111111111111111, 1e-12);
  ChargingStation step = half;
  step.pi = PiecewiseFn({{0, 1.0}, {1, 1.0}, {1, 0.2}, {1000, 0.2}});
  EXPECT_DOUBLE_EQ(footprint(step, 100, 5, 1.5), 2.0);
  EXPECT_DOUBLE_EQ(footprint(step, 100, 0, 0.5), 0.0);
  EXPECT_THROW(footprint(step, 100, 5, 2000), Error);
}

TEST(FootprintTest, LinearInChargedEnergy) {
  const ChargingStation st = LinearTwoPerHour();
  for (double t : {1.0, 7.5, 20.0}) {
    EXPECT_NEAR(footprint(st, 0, 2 * t, 4), 2 * footprint(st, 0, t, 4), 1e-12);
  }
}

// 0 -> 1 -> 2, station at 1: 100 kWh then 250 kWh with B = 300.
Instance Fixture(double deadline = 10.0) {
  return testing::ThreeNodeLine(300, 100, 250, PiecewiseFn::Constant(0.5, 0, 30),
                                deadline, 60.0);
}

SolutionProfile FixturePlan() {
  SolutionProfile sol;
  sol.path = {0, 1, 2};
  sol.edges = {0, 1};
  sol.travel = {1.0, 1.0};
  sol.stops = {{1, 0.5, 50.0 / 60.0}};
  return sol;
}

TEST(ValidateTest, FeasiblePlan) {
  const Instance in = Fixture();
  const ValidationReport r = validate_solution(in, FixturePlan());
  ASSERT_TRUE(r.ok) << r.first_violation->detail;
  EXPECT_NEAR(r.objective, 25.0, 1e-9);
  EXPECT_NEAR(r.evaluated.footprint, 25.0, 1e-9);
  ASSERT_EQ(r.evaluated.stop_footprints.size(), 1u);
  EXPECT_NEAR(r.evaluated.stop_footprints[0], 25.0, 1e-9);
  EXPECT_NEAR(r.evaluated.elapsed, 2.5 + 50.0 / 60.0, 1e-12);
  EXPECT_NEAR(r.evaluated.soc[1], 250.0, 1e-9);
  EXPECT_NEAR(r.evaluated.soc[2], 0.0, 1e-9);
  EXPECT_NEAR(r.evaluated.charge_start[0], 1.5, 1e-12);
  EXPECT_EQ(r.checks.size(), 5u);
}

TEST(ValidateTest, DeadlineViolation) {
  const ValidationReport r = validate_solution(Fixture(3.0), FixturePlan());
  ASSERT_FALSE(r.ok);
  EXPECT_EQ(r.first_violation->constraint, Constraint::kDeadline);
}

TEST(ValidateTest, TravelBelowLowerBound) {
  SolutionProfile sol = FixturePlan();
  sol.travel[0] = 0.9;
  const ValidationReport r = validate_solution(Fixture(), sol);
  ASSERT_FALSE(r.ok);
  EXPECT_EQ(r.first_violation->constraint, Constraint::kBounds);
}

TEST(ValidateTest, WaitBelowLowerBound) {
  Instance base = Fixture();
  std::vector<ChargingStation> stations = base.stations();
  stations[0].tw_lb = 1.0;
  const Instance in({0, 1, 2}, {NodeKind::kRoad, NodeKind::kCharging, NodeKind::kRoad},
                    base.edges(), stations, 0, 2, 10.0, 300);
  const ValidationReport r = validate_solution(in, FixturePlan());
  ASSERT_FALSE(r.ok);
  EXPECT_EQ(r.first_violation->constraint, Constraint::kBounds);
}

TEST(ValidateTest, NegativeSocNamesTheNode) {
  SolutionProfile sol = FixturePlan();
  sol.stops[0].charge = 40.0 / 60.0;
  const ValidationReport r = validate_solution(Fixture(), sol);
  ASSERT_FALSE(r.ok);
  EXPECT_EQ(r.first_violation->constraint, Constraint::kNonNegativity);
  EXPECT_NE(r.first_violation->detail.find("node 2"), std::string::npos)
      << r.first_violation->detail;
}

TEST(ValidateTest, InitialSocAboveCapacity) {
  ValidationOptions options;
  options.initial_soc = 350.0;
  const ValidationReport r = validate_solution(Fixture(), FixturePlan(), options);
  ASSERT_FALSE(r.ok);
  EXPECT_EQ(r.first_violation->constraint, Constraint::kInitialSoc);
}

TEST(ValidateTest, StructuralErrorsThrow) {
  SolutionProfile sol = FixturePlan();
  sol.edges = {1, 0};
  EXPECT_THROW(validate_solution(Fixture(), sol), Error);
  sol = FixturePlan();
  sol.path = {0, 1, 7};
  EXPECT_THROW(validate_solution(Fixture(), sol), Error);
  sol = FixturePlan();
  sol.stops = {{2, 0.0, 0.1}};
  EXPECT_THROW(validate_solution(Fixture(), sol), Error);
}

// Objective equals the sum of per-stop footprints under random perturbation.
TEST(ValidateTest, ObjectiveIsSumOfStopFootprints) {
  const Instance in = testing::ThreeNodeLine(
      300, 100, 250, PiecewiseFn({{0, 0.9}, {3, 0.3}, {6, 0.8}, {30, 0.8}}), 10.0,
      60.0, 0.9);
  Rng rng(11);
  for (int k = 0; k < 200; ++k) {
    SolutionProfile sol = FixturePlan();
    sol.stops[0].wait = rng.Real(0, 5);
    sol.stops[0].charge = rng.Real(0, 5);
    const ValidationReport r = validate_solution(in, sol);
    const ChargingStation& st = in.station_at(1);
    const double want = footprint(st, 200, sol.stops[0].charge, 1.0 + sol.stops[0].wait);
    EXPECT_NEAR(r.objective, want, 1e-9 * std::max(1.0, want));
  }
}

TEST(InstanceTest, RejectsBadData) {
  const Instance ok = Fixture();
  std::vector<Edge> edges = ok.edges();
  edges[0].head = 0;  // self-loop
  EXPECT_THROW(Instance({0, 1, 2}, {NodeKind::kRoad, NodeKind::kCharging, NodeKind::kRoad},
                        edges, ok.stations(), 0, 2, 10, 300),
               Error);
  // Intensity horizon shorter than deadline plus the longest wait.
  std::vector<ChargingStation> st = ok.stations();
  st[0].pi = PiecewiseFn::Constant(0.5, 0, 12);
  EXPECT_THROW(Instance({0, 1, 2}, {NodeKind::kRoad, NodeKind::kCharging, NodeKind::kRoad},
                        ok.edges(), st, 0, 2, 10, 300),
               Error);
  st = ok.stations();
  st[0].eta = 1.2;
  EXPECT_THROW(Instance({0, 1, 2}, {NodeKind::kRoad, NodeKind::kCharging, NodeKind::kRoad},
                        ok.edges(), st, 0, 2, 10, 300),
               Error);
}

TEST(InstanceTest, DerivedCopies) {
  const Instance in = Fixture();
  const Instance unit = in.with_unit_intensity();
  EXPECT_DOUBLE_EQ(unit.station_at(1).pi(3.0), 1.0);
  EXPECT_DOUBLE_EQ(unit.station_at(1).eta, 1.0);
  const Instance small = in.with_capacity(240.0);
  EXPECT_DOUBLE_EQ(small.capacity(), 240.0);
  EXPECT_DOUBLE_EQ(small.station_at(1).capacity(), 240.0);
  EXPECT_DOUBLE_EQ(in.with_deadline(4.0).deadline(), 4.0);
}

}  // namespace
}  // namespace cfo
