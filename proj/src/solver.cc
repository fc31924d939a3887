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

#include "cfo/solver.h"

#include <chrono>

namespace cfo {

const char* ToString(SolveStatus status) {
  return status == SolveStatus::kSolved ? "solved" : "infeasible";
}

Kg initial_upper_bound(const Instance& instance) {
  double pi_ub = 0.0;
  double eta_min = 1.0;
  for (const ChargingStation& st : instance.stations()) {
    pi_ub = std::max(pi_ub, st.pi.max_value());
    eta_min = std::min(eta_min, st.eta);
  }
  return instance.num_stations() * instance.capacity() * pi_ub / eta_min;
}

Kg omega_floor(const Instance& instance, double eps_beta, double eps_f) {
  const int n = instance.num_nodes() + instance.num_stations() + 1;
  const Kwh delta_beta = eps_beta * instance.capacity() / n;
  double pi_min = kInf;
  double eta_max = 0.0;
  for (const ChargingStation& st : instance.stations()) {
    for (const Breakpoint& p : st.pi.points()) {
      if (p.y > 0.0) pi_min = std::min(pi_min, p.y);
    }
    eta_max = std::max(eta_max, st.eta);
  }
  if (pi_min == kInf || eta_max == 0.0) return eps_f * delta_beta;
  return eps_f * delta_beta * pi_min / eta_max;
}

ApxTester::ApxTester(const Instance& instance, double eps_beta)
    : instance_(&instance), eps_beta_(eps_beta) {
  const GridParams grids = make_grids(instance, eps_beta, 1.0, 1.0);
  psi_ = std::make_unique<PsiTable>(instance, grids);
}

ApxTester::Result ApxTester::Test(Kg omega, double eps_f) {
  Result result;
  result.grids = make_grids(*instance_, eps_beta_, eps_f, omega);
  const SigmaTable sigma = compute_sigma(*instance_, result.grids, *psi_);
  result.sigma_stats = sigma.stats();
  result.recovered = recover_solution(*instance_, result.grids, *psi_, sigma);
  return result;
}

std::optional<SolutionProfile> apxtest(const Instance& instance, Kg omega,
                                       double eps_beta, double eps_f) {
  ApxTester tester(instance, eps_beta);
  ApxTester::Result result = tester.Test(omega, eps_f);
  if (!result.recovered) return std::nullopt;
  return std::move(result.recovered->profile);
}

SolveReport apxcfo(const Instance& instance, double eps_beta, double eps_f) {
  const auto started = std::chrono::steady_clock::now();
  SolveReport report;
  const double eps_probe = eps_f / 2.0;
  ApxTester tester(instance, eps_beta);
  report.floor = omega_floor(instance, eps_beta, eps_f);
  report.initial_ub = initial_upper_bound(instance);
  Kg ub = report.initial_ub;
  if (!(ub > 0.0)) {
    report.flags.push_back("zero-upper-bound");
    ub = report.floor;
  }
  Kg lb = 0.0;

  auto probe = [&](Kg omega) {
    ApxTester::Result result = tester.Test(omega, eps_probe);
    Probe p;
    p.omega = omega;
    p.success = result.recovered.has_value();
    if (p.success) p.footprint = result.recovered->profile.footprint;
    report.probes.push_back(p);
    return result;
  };

  // Feasibility check at the initial upper bound.
  ApxTester::Result last = probe(ub);
  if (last.recovered) {
    while ((lb == 0.0 || ub / lb > 2.0) && ub > report.floor) {
      const Kg omega = (lb + ub) / 2.0;
      if (probe(omega).recovered) {
        ub = omega;
      } else {
        lb = omega;
      }
    }
    if (lb == 0.0) report.flags.push_back("floor-terminated");
    last = tester.Test(ub, eps_probe);
  }

  report.lb = lb;
  report.ub = ub;
  report.grids = last.grids;
  report.checked_capacity = last.grids.beta0_hat;
  report.checked_initial_soc = last.grids.beta0_hat;
  if (last.recovered) {
    report.status = SolveStatus::kSolved;
    report.solution = std::move(last.recovered->profile);
    if (report.solution->footprint == 0.0) report.flags.push_back("exact-zero");
  } else {
    report.status = SolveStatus::kInfeasible;
  }

  const PsiTable& psi = tester.psi();
  DpStats& s = report.stats;
  s.n = last.grids.n;
  s.m_beta = last.grids.m_beta;
  s.m_f = last.grids.m_f;
  s.cap_index = last.grids.cap_index;
  s.psi_source_keys = psi.stats().source_keys;
  s.psi_label_slots = psi.label_slots();
  s.sigma_hubs = last.sigma_stats.hubs;
  s.sigma_states = last.sigma_stats.states;
  s.psi_relaxations = psi.stats().relaxations;
  s.sigma_travel_relaxations = last.sigma_stats.travel_relaxations;
  s.sigma_wait_queries = last.sigma_stats.wait_queries;

  report.wall_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - started)
                       .count();
  return report;
}

SolveReport apxcfo_strict(const Instance& instance, double eps_beta,
                          double eps_f) {
  const Instance shrunk =
      instance.with_capacity(instance.capacity() / (1.0 + eps_beta));
  SolveReport report = apxcfo(shrunk, eps_beta, eps_f);
  report.checked_capacity = instance.capacity();
  report.checked_initial_soc = instance.capacity();
  if (!report.solution) return report;
  ValidationOptions options;
  options.capacity = instance.capacity();
  options.initial_soc = instance.capacity();
  ValidationReport check = validate_solution(instance, *report.solution, options);
  if (!check.ok) {
    report.flags.push_back("strict-check-failed: " +
                           check.first_violation->detail);
    report.status = SolveStatus::kInfeasible;
    report.solution.reset();
    return report;
  }
  report.solution = std::move(check.evaluated);
  return report;
}

}  // namespace cfo
