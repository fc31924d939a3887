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

// Fastest energy-feasible paths between charging stops on the SoC grid.

#pragma once

#include <map>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "cfo/common.h"
#include "cfo/discretize.h"
#include "cfo/model.h"

namespace cfo {

// SoC index after a transition consuming `ic` grid units, clipped at `cap`;
// nullopt when the battery would go negative.
std::optional<int> step_soc_forward(int i_w, int ic, int cap);

// Grid-value form of step_soc_forward().
std::optional<Kwh> step_soc_forward(Kwh beta_w, Kwh c_hat, Kwh cap);

enum class PsiAlgorithm {
  kAuto,
  // FIFO label correcting to a fixpoint; valid for any consumption sign.
  kLabelCorrecting,
  // One pass over SoC levels from the top down. Requires that no edge can
  // raise the SoC.
  kLevelSweep,
};

struct PsiStats {
  long long source_keys = 0;
  long long relaxations = 0;
  long long queue_pops = 0;
  long long levels = 0;
  long long level_sweeps = 0;
};

// Minimum travel times from a source state (u, i_u) to every reachable
// state (v, i_v), where i is an SoC grid index in [0, cap_index].
//
// Rows are built on first access and cached; a table is not safe for
// concurrent use.
class PsiTable {
 public:
  struct Entry {
    NodeIndex v = 0;
    int i = 0;
    Hours time = kInf;
    EdgeIndex edge = -1;  // -1 at the source state
    int ic = 0;
    NodeIndex pred_v = -1;
    int pred_i = -1;
  };

  struct Row {
    // Reached states sorted by (v, i).
    std::vector<Entry> entries;
    // Positions in `entries` of states whose node is a station or the
    // destination.
    std::vector<int> hub_entries;
  };

  PsiTable(const Instance& instance, const GridParams& grids,
           PsiAlgorithm algorithm = PsiAlgorithm::kAuto);

  const Instance& instance() const { return *instance_; }
  int cap_index() const { return cap_; }
  Kwh delta_beta() const { return delta_; }
  bool uses_level_sweep() const { return level_sweep_; }
  // Label slots per source key: num_nodes * (m_beta + 1).
  long long label_slots() const { return static_cast<long long>(labels_.size()); }

  const Row& row(NodeIndex u, int i_u) const;
  // Entry for (v, i_v) in row (u, i_u), or nullptr if unreachable.
  const Entry* find(NodeIndex u, int i_u, NodeIndex v, int i_v) const;
  Hours at(NodeIndex u, int i_u, NodeIndex v, int i_v) const;

  // closed[i] = min over j >= i of at(u, i_u, v, j), for i in [0, cap].
  std::vector<Hours> closed(NodeIndex u, int i_u, NodeIndex v) const;

  // Source nodes of rows that Phase II may request: stations and s.
  const std::vector<NodeIndex>& tails() const { return tails_; }
  void materialize_all() const;
  int materialized_rows() const { return static_cast<int>(rows_.size()); }

  const PsiStats& stats() const { return stats_; }

 private:
  struct Label {
    Hours time = kInf;
    EdgeIndex edge = -1;
    int ic = 0;
    int pred = -1;
  };

  struct Option {
    EdgeIndex edge = 0;
    NodeIndex head = 0;
    int ic = 0;
    Hours time = 0.0;
  };

  void Build(NodeIndex u, int i_u, Row& row) const;
  bool Relax(int from, const Option& opt, int to) const;
  void RunLabelCorrecting(int start) const;
  void RunLevelSweep(int start) const;

  const Instance* instance_;
  int cap_ = 0;
  int width_ = 0;
  Kwh delta_ = 0.0;
  bool level_sweep_ = false;
  std::vector<std::vector<Option>> options_;  // per node, ordered by edge, ic
  std::vector<bool> is_hub_;
  std::vector<NodeIndex> tails_;

  mutable std::map<std::pair<NodeIndex, int>, std::unique_ptr<Row>> rows_;
  mutable std::vector<Label> labels_;
  mutable std::vector<int> touched_;
  mutable PsiStats stats_;
};

// Builds a table and materializes every row with a source in tails().
std::unique_ptr<PsiTable> compute_psi(
    const Instance& instance, const GridParams& grids,
    PsiAlgorithm algorithm = PsiAlgorithm::kAuto);

struct Segment {
  std::vector<NodeIndex> nodes;
  std::vector<EdgeIndex> edges;
  std::vector<Hours> times;
  std::vector<int> ics;
};

// Replays backpointers from (v, i_v) to the source (u, i_u). Throws kNoPath
// if the state is unreachable.
Segment extract_segment(const PsiTable& psi, NodeIndex u, int i_u, NodeIndex v,
                        int i_v);

}  // namespace cfo
