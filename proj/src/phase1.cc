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

#include "cfo/phase1.h"

#include <algorithm>
#include <deque>
#include <sstream>
#include <tuple>

namespace cfo {

std::optional<int> step_soc_forward(int i_w, int ic, int cap) {
  const int next = i_w - ic;
  if (next < 0) return std::nullopt;
  return std::min(cap, next);
}

std::optional<Kwh> step_soc_forward(Kwh beta_w, Kwh c_hat, Kwh cap) {
  const Kwh next = beta_w - c_hat;
  if (next < -kTol) return std::nullopt;
  return std::min(cap, std::max(0.0, next));
}

PsiTable::PsiTable(const Instance& instance, const GridParams& grids,
                   PsiAlgorithm algorithm)
    : instance_(&instance), cap_(grids.cap_index), delta_(grids.delta_beta) {
  const int n = instance.num_nodes();
  options_.assign(n, {});
  int min_ic = 0;
  for (EdgeIndex e = 0; e < instance.num_edges(); ++e) {
    const Edge& edge = instance.edge(e);
    for (const EdgeOption& opt : edge_options(edge, delta_)) {
      options_[edge.tail].push_back({e, edge.head, opt.ic, opt.time});
      min_ic = std::min(min_ic, opt.ic);
    }
  }
  switch (algorithm) {
    case PsiAlgorithm::kAuto:
      level_sweep_ = min_ic >= 0;
      break;
    case PsiAlgorithm::kLabelCorrecting:
      level_sweep_ = false;
      break;
    case PsiAlgorithm::kLevelSweep:
      if (min_ic < 0) {
        throw Error(ErrorKind::kArgument,
                    "level sweep needs non-negative consumption");
      }
      level_sweep_ = true;
      break;
  }
  is_hub_.assign(n, false);
  for (NodeIndex v : instance.station_nodes()) is_hub_[v] = true;
  is_hub_[instance.dest()] = true;
  tails_ = instance.station_nodes();
  if (!instance.is_station(instance.source())) {
    tails_.push_back(instance.source());
    std::sort(tails_.begin(), tails_.end());
  }
  width_ = grids.m_beta + 1;
  labels_.assign(static_cast<size_t>(n) * width_, Label{});
}

bool PsiTable::Relax(int from, const Option& opt, int to) const {
  ++stats_.relaxations;
  const Hours t = labels_[from].time + opt.time;
  Label& cur = labels_[to];
  if (t < cur.time) {
    if (cur.time == kInf) touched_.push_back(to);
    cur = {t, opt.edge, opt.ic, from};
    return true;
  }
  if (t == cur.time && std::tie(opt.edge, opt.ic, from) <
                           std::tie(cur.edge, cur.ic, cur.pred)) {
    cur.edge = opt.edge;
    cur.ic = opt.ic;
    cur.pred = from;
  }
  return false;
}

void PsiTable::RunLabelCorrecting(int start) const {
  const int width = width_;
  std::deque<int> queue{start};
  std::vector<bool> queued(labels_.size(), false);
  queued[start] = true;
  while (!queue.empty()) {
    const int s = queue.front();
    queue.pop_front();
    queued[s] = false;
    ++stats_.queue_pops;
    const NodeIndex w = s / width;
    const int i_w = s % width;
    for (const Option& opt : options_[w]) {
      const std::optional<int> i_v = step_soc_forward(i_w, opt.ic, cap_);
      if (!i_v) continue;
      const int to = opt.head * width + *i_v;
      if (Relax(s, opt, to) && !queued[to]) {
        queued[to] = true;
        queue.push_back(to);
      }
    }
  }
}

void PsiTable::RunLevelSweep(int start) const {
  const int width = width_;
  const int n = instance_->num_nodes();
  ++stats_.level_sweeps;
  std::vector<bool> queued(n, false);
  for (int level = start % width; level >= 0; --level) {
    ++stats_.levels;
    std::deque<NodeIndex> queue;
    for (NodeIndex v = 0; v < n; ++v) {
      if (labels_[v * width + level].time < kInf) {
        queue.push_back(v);
        queued[v] = true;
      }
    }
    while (!queue.empty()) {
      const NodeIndex w = queue.front();
      queue.pop_front();
      queued[w] = false;
      ++stats_.queue_pops;
      const int s = w * width + level;
      for (const Option& opt : options_[w]) {
        const int i_v = level - opt.ic;
        if (i_v < 0) continue;
        const int to = opt.head * width + i_v;
        if (Relax(s, opt, to) && opt.ic == 0 && !queued[opt.head]) {
          queued[opt.head] = true;
          queue.push_back(opt.head);
        }
      }
    }
  }
}

void PsiTable::Build(NodeIndex u, int i_u, Row& row) const {
  const int width = width_;
  ++stats_.source_keys;
  const int start = u * width + i_u;
  labels_[start] = {0.0, -1, 0, -1};
  touched_.assign(1, start);
  if (level_sweep_) {
    RunLevelSweep(start);
  } else {
    RunLabelCorrecting(start);
  }
  std::sort(touched_.begin(), touched_.end());
  row.entries.reserve(touched_.size());
  for (int s : touched_) {
    const Label& l = labels_[s];
    Entry e;
    e.v = s / width;
    e.i = s % width;
    e.time = l.time;
    e.edge = l.edge;
    e.ic = l.ic;
    if (l.pred >= 0) {
      e.pred_v = l.pred / width;
      e.pred_i = l.pred % width;
    }
    if (is_hub_[e.v]) row.hub_entries.push_back(static_cast<int>(row.entries.size()));
    row.entries.push_back(e);
    labels_[s] = Label{};
  }
  touched_.clear();
}

const PsiTable::Row& PsiTable::row(NodeIndex u, int i_u) const {
  if (u < 0 || u >= instance_->num_nodes() || i_u < 0 || i_u > cap_) {
    std::ostringstream msg;
    msg << "source state (" << u << ", " << i_u << ") out of range";
    throw Error(ErrorKind::kArgument, msg.str());
  }
  auto& slot = rows_[{u, i_u}];
  if (!slot) {
    auto built = std::make_unique<Row>();
    Build(u, i_u, *built);
    slot = std::move(built);
  }
  return *slot;
}

const PsiTable::Entry* PsiTable::find(NodeIndex u, int i_u, NodeIndex v,
                                      int i_v) const {
  const Row& r = row(u, i_u);
  auto it = std::lower_bound(
      r.entries.begin(), r.entries.end(), std::make_pair(v, i_v),
      [](const Entry& e, const std::pair<NodeIndex, int>& key) {
        return std::make_pair(e.v, e.i) < key;
      });
  if (it == r.entries.end() || it->v != v || it->i != i_v) return nullptr;
  return &*it;
}

Hours PsiTable::at(NodeIndex u, int i_u, NodeIndex v, int i_v) const {
  const Entry* e = find(u, i_u, v, i_v);
  return e ? e->time : kInf;
}

std::vector<Hours> PsiTable::closed(NodeIndex u, int i_u, NodeIndex v) const {
  std::vector<Hours> out(cap_ + 1, kInf);
  for (const Entry& e : row(u, i_u).entries) {
    if (e.v == v) out[e.i] = e.time;
  }
  for (int i = cap_ - 1; i >= 0; --i) out[i] = std::min(out[i], out[i + 1]);
  return out;
}

void PsiTable::materialize_all() const {
  for (NodeIndex u : tails_) {
    for (int i = 0; i <= cap_; ++i) row(u, i);
  }
}

std::unique_ptr<PsiTable> compute_psi(const Instance& instance,
                                      const GridParams& grids,
                                      PsiAlgorithm algorithm) {
  auto table = std::make_unique<PsiTable>(instance, grids, algorithm);
  table->materialize_all();
  return table;
}

Segment extract_segment(const PsiTable& psi, NodeIndex u, int i_u, NodeIndex v,
                        int i_v) {
  const PsiTable::Entry* e = psi.find(u, i_u, v, i_v);
  if (e == nullptr) {
    std::ostringstream msg;
    msg << "no segment from (" << u << ", " << i_u << ") to (" << v << ", "
        << i_v << ")";
    throw Error(ErrorKind::kNoPath, msg.str());
  }
  Segment seg;
  const Instance& instance = psi.instance();
  int guard = 0;
  const int limit = instance.num_nodes() * (psi.cap_index() + 1) + 1;
  while (e->edge >= 0) {
    if (++guard > limit) {
      throw Error(ErrorKind::kInternal, "backpointer cycle in segment");
    }
    const Edge& edge = instance.edge(e->edge);
    seg.nodes.push_back(e->v);
    seg.edges.push_back(e->edge);
    seg.times.push_back(t_hat_index(edge, e->ic, psi.delta_beta()));
    seg.ics.push_back(e->ic);
    e = psi.find(u, i_u, e->pred_v, e->pred_i);
    if (e == nullptr) {
      throw Error(ErrorKind::kInternal, "dangling backpointer in segment");
    }
  }
  seg.nodes.push_back(e->v);
  std::reverse(seg.nodes.begin(), seg.nodes.end());
  std::reverse(seg.edges.begin(), seg.edges.end());
  std::reverse(seg.times.begin(), seg.times.end());
  std::reverse(seg.ics.begin(), seg.ics.end());
  return seg;
}

}  // namespace cfo
