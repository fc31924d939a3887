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

#include "cfo/harness.h"

#include <cstdio>
#include <sstream>

#include "cfo/instance_io.h"
#include "json.hpp"

namespace cfo {

const char* ToString(Mode mode) {
  switch (mode) {
    case Mode::kCarbon: return "carbon";
    case Mode::kEnergy: return "energy";
    case Mode::kStrict: return "strict";
  }
  return "unknown";
}

Mode ParseMode(const std::string& name) {
  if (name == "carbon") return Mode::kCarbon;
  if (name == "energy") return Mode::kEnergy;
  if (name == "strict") return Mode::kStrict;
  throw Error(ErrorKind::kArgument, "unknown mode \"" + name + "\"");
}

const char* PolicyName(Mode mode) {
  switch (mode) {
    case Mode::kCarbon: return "apx-c";
    case Mode::kEnergy: return "apx-e";
    case Mode::kStrict: return "apx-s";
  }
  return "unknown";
}

PolicyResult run_policy(const Instance& instance, Mode mode, double eps_beta,
                        double eps_f) {
  PolicyResult result;
  result.mode = mode;
  switch (mode) {
    case Mode::kCarbon:
      result.report = apxcfo(instance, eps_beta, eps_f);
      result.solution = result.report.solution;
      break;
    case Mode::kStrict:
      result.report = apxcfo_strict(instance, eps_beta, eps_f);
      result.solution = result.report.solution;
      break;
    case Mode::kEnergy: {
      const Instance unit = instance.with_unit_intensity();
      result.report = apxcfo(unit, eps_beta, eps_f);
      if (result.report.solution) {
        ValidationOptions options;
        options.capacity = result.report.checked_capacity;
        options.initial_soc = result.report.checked_initial_soc;
        ValidationReport priced =
            validate_solution(instance, *result.report.solution, options);
        if (!priced.ok) {
          throw Error(ErrorKind::kInternal,
                      "energy plan fails under true intensity: " +
                          priced.first_violation->detail);
        }
        result.solution = std::move(priced.evaluated);
      }
      break;
    }
  }
  return result;
}

ResultRow make_row(double deadline, const PolicyResult& result) {
  ResultRow row;
  row.deadline_h = deadline;
  row.policy = PolicyName(result.mode);
  row.status = ToString(result.report.status);
  row.probes = static_cast<int>(result.report.probes.size());
  row.wall_ms = result.report.wall_ms;
  if (result.solution) {
    const SolutionProfile& sol = *result.solution;
    row.footprint_kg = sol.footprint;
    row.elapsed_h = sol.elapsed;
    row.max_soc_kwh = sol.max_soc;
    row.n_stops = static_cast<int>(sol.stops.size());
  }
  return row;
}

ResultRow make_lb_row(double deadline, const PolicyResult& carbon) {
  ResultRow row;
  row.deadline_h = deadline;
  row.policy = "lb";
  row.status = ToString(carbon.report.status);
  row.probes = static_cast<int>(carbon.report.probes.size());
  if (carbon.report.status == SolveStatus::kSolved) {
    row.footprint_kg = carbon.report.lb;
  }
  return row;
}

std::string csv_header() {
  return "deadline_h,policy,status,footprint_kg,elapsed_h,max_soc_kwh,n_stops,"
         "probes,wall_ms";
}

namespace {

std::string Fixed(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, x);
  return buf;
}

std::string Optional(const std::optional<double>& x, int digits) {
  return x ? Fixed(*x, digits) : "";
}

}  // namespace

std::string format_row(const ResultRow& row, bool timing) {
  std::ostringstream out;
  out << Fixed(row.deadline_h, 2) << ',' << row.policy << ',' << row.status
      << ',' << Optional(row.footprint_kg, 6) << ','
      << Optional(row.elapsed_h, 6) << ',' << Optional(row.max_soc_kwh, 6)
      << ',' << (row.n_stops ? std::to_string(*row.n_stops) : "") << ','
      << row.probes << ',' << (timing ? Fixed(row.wall_ms, 1) : "0");
  return out.str();
}

std::string format_csv(const std::vector<ResultRow>& rows, bool timing) {
  std::string out = csv_header() + "\n";
  for (const ResultRow& row : rows) out += format_row(row, timing) + "\n";
  return out;
}

std::vector<ResultRow> run_sweep(const Instance& instance,
                                 const std::vector<double>& deadlines,
                                 double eps_beta, double eps_f) {
  for (size_t k = 1; k < deadlines.size(); ++k) {
    if (!(deadlines[k] > deadlines[k - 1])) {
      throw Error(ErrorKind::kArgument, "deadlines must be strictly ascending");
    }
  }
  std::vector<ResultRow> rows;
  for (double deadline : deadlines) {
    const Instance at = instance.with_deadline(deadline);
    const PolicyResult carbon = run_policy(at, Mode::kCarbon, eps_beta, eps_f);
    const PolicyResult energy = run_policy(at, Mode::kEnergy, eps_beta, eps_f);
    rows.push_back(make_row(deadline, carbon));
    rows.push_back(make_row(deadline, energy));
    rows.push_back(make_lb_row(deadline, carbon));
  }
  return rows;
}

std::string format_solve_report(const Instance& instance,
                                const PolicyResult& result, bool timing) {
  using Json = nlohmann::ordered_json;
  const SolveReport& r = result.report;
  Json doc;
  doc["status"] = ToString(r.status);
  doc["mode"] = ToString(result.mode);
  doc["footprint_kg"] =
      result.solution ? Json(result.solution->footprint) : Json(nullptr);
  doc["lb"] = r.lb;
  doc["ub"] = r.ub;
  doc["initial_ub"] = r.initial_ub;
  doc["omega_floor"] = r.floor;
  Json probes = Json::array();
  for (const Probe& p : r.probes) {
    probes.push_back({{"omega", p.omega},
                      {"success", p.success},
                      {"footprint", p.success ? Json(p.footprint) : Json(nullptr)}});
  }
  doc["probes"] = std::move(probes);
  doc["flags"] = r.flags;
  doc["grids"] = {{"n", r.grids.n},
                  {"delta_beta", r.grids.delta_beta},
                  {"m_beta", r.grids.m_beta},
                  {"delta_f", r.grids.delta_f},
                  {"m_f", r.grids.m_f},
                  {"beta0_hat", r.grids.beta0_hat}};
  doc["checked_capacity"] = r.checked_capacity;
  doc["checked_initial_soc"] = r.checked_initial_soc;
  doc["wall_ms"] = timing ? r.wall_ms : 0.0;
  doc["solution"] = result.solution
                        ? Json::parse(serialize_solution(instance, *result.solution))
                        : Json(nullptr);
  return doc.dump(2) + "\n";
}

}  // namespace cfo
