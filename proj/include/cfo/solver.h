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

// Bisection driver over footprint guesses and the capacity-shrink wrapper.

#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cfo/common.h"
#include "cfo/discretize.h"
#include "cfo/model.h"
#include "cfo/phase1.h"
#include "cfo/phase2.h"

namespace cfo {

// |V_c| * B * max intensity / min efficiency.
Kg initial_upper_bound(const Instance& instance);

// Smallest guess the bisection refines to: eps_f times the footprint of one
// SoC quantum at the lowest positive intensity.
Kg omega_floor(const Instance& instance, double eps_beta, double eps_f);

// One test at a fixed guess. Returns a plan whose footprint is at most
// OPT + eps_f * omega whenever omega >= OPT; nullopt means omega < OPT or
// the instance is infeasible.
std::optional<SolutionProfile> apxtest(const Instance& instance, Kg omega,
                                       double eps_beta, double eps_f);

// Runs repeated tests on one instance, reusing the Phase I table, which
// depends on eps_beta only.
class ApxTester {
 public:
  ApxTester(const Instance& instance, double eps_beta);

  struct Result {
    GridParams grids;
    std::optional<Recovered> recovered;
    SigmaStats sigma_stats;
  };

  Result Test(Kg omega, double eps_f);

  const PsiTable& psi() const { return *psi_; }

 private:
  const Instance* instance_;
  double eps_beta_;
  std::unique_ptr<PsiTable> psi_;
};

enum class SolveStatus { kSolved, kInfeasible };

const char* ToString(SolveStatus status);

struct Probe {
  Kg omega = 0.0;
  bool success = false;
  Kg footprint = 0.0;  // of the returned plan, if any
};

struct DpStats {
  int n = 0;
  int m_beta = 0;
  int m_f = 0;
  int cap_index = 0;
  long long psi_source_keys = 0;  // rows built
  long long psi_label_slots = 0;  // per source key
  int sigma_hubs = 0;
  long long sigma_states = 0;
  long long psi_relaxations = 0;
  long long sigma_travel_relaxations = 0;
  long long sigma_wait_queries = 0;
};

struct SolveReport {
  SolveStatus status = SolveStatus::kInfeasible;
  std::optional<SolutionProfile> solution;
  Kg lb = 0.0;
  Kg ub = 0.0;
  Kg initial_ub = 0.0;
  Kg floor = 0.0;
  std::vector<Probe> probes;
  GridParams grids;  // of the final test
  double wall_ms = 0.0;
  // Notes such as "floor-terminated" or "exact-zero".
  std::vector<std::string> flags;
  DpStats stats;
  // Capacity and initial SoC the solution was checked against.
  Kwh checked_capacity = 0.0;
  Kwh checked_initial_soc = 0.0;
};

SolveReport apxcfo(const Instance& instance, double eps_beta, double eps_f);

// Plans with capacity B / (1 + eps_beta) and checks the plan against the
// original capacity and a full initial battery.
SolveReport apxcfo_strict(const Instance& instance, double eps_beta,
                          double eps_f);

}  // namespace cfo
