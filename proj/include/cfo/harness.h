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

// Policies, deadline sweeps and result tables.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cfo/model.h"
#include "cfo/solver.h"

namespace cfo {

enum class Mode { kCarbon, kEnergy, kStrict };

const char* ToString(Mode mode);
// Throws kArgument for unknown names.
Mode ParseMode(const std::string& name);

struct PolicyResult {
  Mode mode = Mode::kCarbon;
  SolveReport report;
  // The plan priced under the true intensity profiles. For energy mode the
  // plan is computed with unit intensity and re-priced here.
  std::optional<SolutionProfile> solution;
};

PolicyResult run_policy(const Instance& instance, Mode mode, double eps_beta,
                        double eps_f);

struct ResultRow {
  double deadline_h = 0.0;
  std::string policy;  // apx-c, apx-e, apx-s, lb or oracle
  std::string status;  // solved or infeasible
  std::optional<double> footprint_kg;
  std::optional<double> elapsed_h;
  std::optional<double> max_soc_kwh;
  std::optional<int> n_stops;
  int probes = 0;
  double wall_ms = 0.0;
};

const char* PolicyName(Mode mode);

ResultRow make_row(double deadline, const PolicyResult& result);
// Row carrying the final lower bound of an apx-c run.
ResultRow make_lb_row(double deadline, const PolicyResult& carbon);

std::string csv_header();
// wall_ms is written as 0 unless `timing` is set, keeping output
// reproducible.
std::string format_row(const ResultRow& row, bool timing);
std::string format_csv(const std::vector<ResultRow>& rows, bool timing);

// apx-c, apx-e and lb rows for each deadline, in the given order. Throws
// kArgument unless `deadlines` is strictly ascending.
std::vector<ResultRow> run_sweep(const Instance& instance,
                                 const std::vector<double>& deadlines,
                                 double eps_beta, double eps_f);

// JSON summary of a solve: status, bracket, probes and the plan.
std::string format_solve_report(const Instance& instance,
                                const PolicyResult& result, bool timing);

}  // namespace cfo
