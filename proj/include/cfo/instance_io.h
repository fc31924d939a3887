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

// JSON reading and writing of instances and plans.
//
// Instance documents carry a mandatory units header (time "h", energy
// "kWh", intensity "kg/kWh"), a node list, edges with energy breakpoints,
// station records and a query. Parse failures name the offending field,
// e.g. "edges[3].t_lb: must be positive".

#pragma once

#include <string>

#include "cfo/model.h"

namespace cfo {

// Throws Error(kParse) with a path-to-field diagnostic.
Instance parse_instance(const std::string& text);
Instance read_instance_file(const std::string& path);

// Canonical form: fixed key order, two-space indent, shortest round-trip
// number formatting, trailing newline.
std::string serialize_instance(const Instance& instance);

// Plans reference nodes by external id and edges by position in the
// instance's edge list.
SolutionProfile parse_solution(const Instance& instance,
                               const std::string& text);
SolutionProfile read_solution_file(const Instance& instance,
                                   const std::string& path);
std::string serialize_solution(const Instance& instance,
                               const SolutionProfile& sol);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace cfo
