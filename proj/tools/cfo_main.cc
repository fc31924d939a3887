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

// cfo: solve, sweep, gen, validate and oracle subcommands.
//
// Exit codes: 0 solved / valid, 2 infeasible / invalid, 1 error.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cfo/generate.h"
#include "cfo/harness.h"
#include "cfo/instance_io.h"
#include "cfo/oracle.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInfeasible = 2;

void Emit(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << text;
    std::cout.flush();
  } else {
    cfo::write_text_file(out, text);
  }
}

cfo::Instance LoadInstance(const std::string& path,
                           const std::optional<double>& deadline) {
  cfo::Instance instance = cfo::read_instance_file(path);
  if (deadline) return instance.with_deadline(*deadline);
  return instance;
}

struct SolveArgs {
  std::string instance;
  double eps_beta = 0.1;
  double eps_f = 0.1;
  std::string mode = "carbon";
  std::optional<double> deadline;
  std::string out;
  std::string csv;
  bool timing = false;
};

int RunSolve(const SolveArgs& a) {
  const cfo::Instance instance = LoadInstance(a.instance, a.deadline);
  const cfo::PolicyResult result =
      cfo::run_policy(instance, cfo::ParseMode(a.mode), a.eps_beta, a.eps_f);
  const cfo::ResultRow row = cfo::make_row(instance.deadline(), result);
  Emit(cfo::format_csv({row}, a.timing), a.csv);
  if (!a.out.empty()) {
    Emit(cfo::format_solve_report(instance, result, a.timing), a.out);
  }
  return result.solution ? kExitOk : kExitInfeasible;
}

struct SweepArgs {
  std::string instance;
  double eps_beta = 0.1;
  double eps_f = 0.1;
  std::vector<double> deadlines;
  std::string out;
  bool timing = false;
};

int RunSweep(const SweepArgs& a) {
  const cfo::Instance instance = cfo::read_instance_file(a.instance);
  const std::vector<cfo::ResultRow> rows =
      cfo::run_sweep(instance, a.deadlines, a.eps_beta, a.eps_f);
  Emit(cfo::format_csv(rows, a.timing), a.out);
  for (const cfo::ResultRow& row : rows) {
    if (row.status == "solved") return kExitOk;
  }
  return kExitInfeasible;
}

struct GenArgs {
  uint64_t seed = 1;
  std::string profile = "line";
  bool aligned = false;
  int nodes = 0;
  int stations = -1;
  std::string out;
};

int RunGen(const GenArgs& a) {
  cfo::GenOptions options;
  options.seed = a.seed;
  options.profile = cfo::ParseProfile(a.profile);
  options.aligned = a.aligned;
  options.nodes = a.nodes;
  options.stations = a.stations;
  Emit(cfo::serialize_instance(cfo::generate_instance(options)), a.out);
  return kExitOk;
}

struct ValidateArgs {
  std::string instance;
  std::string solution;
  std::optional<double> capacity;
  std::optional<double> initial_soc;
};

int RunValidate(const ValidateArgs& a) {
  const cfo::Instance instance = cfo::read_instance_file(a.instance);
  const cfo::SolutionProfile sol = cfo::read_solution_file(instance, a.solution);
  cfo::ValidationOptions options;
  options.capacity = a.capacity;
  options.initial_soc = a.initial_soc;
  const cfo::ValidationReport report =
      cfo::validate_solution(instance, sol, options);
  for (const cfo::ConstraintStatus& c : report.checks) {
    std::cout << cfo::ToString(c.constraint) << ": "
              << (c.ok ? "pass" : "fail");
    if (!c.ok) std::cout << " (" << c.detail << ")";
    std::cout << "\n";
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", report.objective);
  std::cout << "objective_kg: " << buf << "\n";
  std::cout << "result: " << (report.ok ? "valid" : "invalid") << "\n";
  return report.ok ? kExitOk : kExitInfeasible;
}

struct OracleArgs {
  std::string instance;
  std::optional<double> deadline;
  double charge_step = 0.0;
  long long node_budget = 10'000'000;
  std::string out;
};

int RunOracle(const OracleArgs& a) {
  const cfo::Instance instance = LoadInstance(a.instance, a.deadline);
  cfo::OracleConfig cfg;
  cfg.charge_step = a.charge_step;
  cfg.node_budget = a.node_budget;
  const cfo::OracleResult result = cfo::oracle_opt(instance, cfg);
  cfo::ResultRow row;
  row.deadline_h = instance.deadline();
  row.policy = "oracle";
  row.status = result.feasible ? "solved" : "infeasible";
  if (result.feasible) {
    row.footprint_kg = result.opt;
    row.elapsed_h = result.profile.elapsed;
    row.max_soc_kwh = result.profile.max_soc;
    row.n_stops = static_cast<int>(result.profile.stops.size());
  }
  Emit(cfo::format_csv({row}, false), "");
  if (!a.out.empty() && result.feasible) {
    Emit(cfo::serialize_solution(instance, result.profile), a.out);
  }
  return result.feasible ? kExitOk : kExitInfeasible;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Carbon-aware route and charging planner"};
  app.require_subcommand(1);

  SolveArgs solve;
  CLI::App* solve_cmd = app.add_subcommand("solve", "Solve one instance");
  solve_cmd->add_option("instance", solve.instance, "Instance file")->required();
  solve_cmd->add_option("--eps-beta", solve.eps_beta, "SoC accuracy")
      ->check(CLI::PositiveNumber);
  solve_cmd->add_option("--eps-f", solve.eps_f, "Footprint accuracy")
      ->check(CLI::PositiveNumber);
  solve_cmd->add_option("--mode", solve.mode, "carbon, energy or strict")
      ->check(CLI::IsMember({"carbon", "energy", "strict"}));
  solve_cmd->add_option("--deadline", solve.deadline, "Override deadline (h)");
  solve_cmd->add_option("--out", solve.out, "Write the solve report and plan");
  solve_cmd->add_option("--csv", solve.csv, "Write the result row here");
  solve_cmd->add_flag("--timing", solve.timing, "Report wall time");

  SweepArgs sweep;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Deadline sweep");
  sweep_cmd->add_option("instance", sweep.instance, "Instance file")->required();
  sweep_cmd->add_option("--eps-beta", sweep.eps_beta, "SoC accuracy")
      ->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--eps-f", sweep.eps_f, "Footprint accuracy")
      ->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--deadlines", sweep.deadlines, "Ascending, in hours")
      ->delimiter(',')
      ->required();
  sweep_cmd->add_option("--out", sweep.out, "CSV output file");
  sweep_cmd->add_flag("--timing", sweep.timing, "Report wall time");

  GenArgs gen;
  CLI::App* gen_cmd = app.add_subcommand("gen", "Generate an instance");
  gen_cmd->add_option("--seed", gen.seed, "Random seed");
  gen_cmd->add_option("--profile", gen.profile, "line, grid or corridor")
      ->check(CLI::IsMember({"line", "grid", "corridor"}));
  gen_cmd->add_flag("--aligned", gen.aligned, "Oracle-friendly instance");
  gen_cmd->add_option("--nodes", gen.nodes, "Node count (0 = random)");
  gen_cmd->add_option("--stations", gen.stations, "Station count (-1 = random)");
  gen_cmd->add_option("--out", gen.out, "Instance output file");

  ValidateArgs validate;
  CLI::App* validate_cmd =
      app.add_subcommand("validate", "Check a plan against an instance");
  validate_cmd->add_option("instance", validate.instance, "Instance file")
      ->required();
  validate_cmd->add_option("solution", validate.solution, "Plan file")
      ->required();
  validate_cmd->add_option("--capacity", validate.capacity,
                           "Working capacity (kWh)");
  validate_cmd->add_option("--initial-soc", validate.initial_soc,
                           "Initial SoC (kWh)");

  OracleArgs oracle;
  CLI::App* oracle_cmd =
      app.add_subcommand("oracle", "Exhaustive search on small instances");
  oracle_cmd->add_option("instance", oracle.instance, "Instance file")
      ->required();
  oracle_cmd->add_option("--deadline", oracle.deadline, "Override deadline (h)");
  oracle_cmd->add_option("--charge-step", oracle.charge_step,
                         "Charge quantum (kWh, 0 = infer)");
  oracle_cmd->add_option("--node-budget", oracle.node_budget,
                         "Search node limit");
  oracle_cmd->add_option("--out", oracle.out, "Write the optimal plan");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  try {
    if (*solve_cmd) return RunSolve(solve);
    if (*sweep_cmd) return RunSweep(sweep);
    if (*gen_cmd) return RunGen(gen);
    if (*validate_cmd) return RunValidate(validate);
    if (*oracle_cmd) return RunOracle(oracle);
  } catch (const cfo::Error& e) {
    std::cerr << "cfo: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "cfo: internal: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
