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

#include <algorithm>
#include <deque>
#include <sstream>
#include <tuple>

namespace cfo {

std::optional<Hours> min_wait_for_energy(const ChargingStation& st, Kwh energy,
                                         Hours tau_u, Kg f_hat) {
  if (energy <= 0.0) return st.tw_lb;
  const PiecewiseFn& pi = st.pi;
  const Hours lo = tau_u + st.tw_lb;
  const Hours hi = tau_u + st.tw_ub;
  if (lo < pi.domain_lo() - kTol || hi > pi.domain_hi() + kTol) {
    std::ostringstream msg;
    msg << "wait window [" << lo << ", " << hi << "] exceeds intensity domain ["
        << pi.domain_lo() << ", " << pi.domain_hi() << "]";
    throw Error(ErrorKind::kOutOfDomain, msg.str());
  }
  auto feasible = [&](double x) {
    return pi(x) * energy / st.eta <= f_hat + kTol;
  };
  const double threshold = st.eta * f_hat / energy;
  for (int k = 0; k < pi.num_pieces(); ++k) {
    const Piece p = pi.piece(k);
    if (p.is_jump()) continue;
    const double a = std::max(p.x_lo, lo);
    const double b = std::min(p.x_hi, hi);
    if (a > b) continue;
    auto linear = [&](double x) {
      return p.x_hi > p.x_lo
                 ? p.y_lo + (p.y_hi - p.y_lo) * (x - p.x_lo) / (p.x_hi - p.x_lo)
                 : p.y_lo;
    };
    double x = a;
    if (linear(a) * energy / st.eta > f_hat + kTol) {
      if (!(p.y_hi < p.y_lo)) continue;
      const std::optional<double> hit = pi.InvertPiece(k, threshold);
      if (!hit || *hit > b) continue;
      x = std::max(*hit, a);
    }
    // At the right end of a piece the value may belong to an upward jump.
    if (feasible(std::clamp(x, pi.domain_lo(), pi.domain_hi()))) {
      return std::clamp(x - tau_u, st.tw_lb, st.tw_ub);
    }
  }
  return std::nullopt;
}

std::optional<Hours> min_wait(const WaitQuery& q) {
  if (q.station == nullptr) {
    throw Error(ErrorKind::kArgument, "wait query without a station");
  }
  const Kwh energy = phi(*q.station, q.t_c, q.beta_u);
  return min_wait_for_energy(*q.station, energy, q.tau_u, q.f_hat);
}

SigmaTable::SigmaTable(const Instance& instance, const GridParams& grids) {
  hub_nodes_ = instance.station_nodes();
  hub_nodes_.push_back(instance.source());
  hub_nodes_.push_back(instance.dest());
  std::sort(hub_nodes_.begin(), hub_nodes_.end());
  hub_nodes_.erase(std::unique(hub_nodes_.begin(), hub_nodes_.end()),
                   hub_nodes_.end());
  hub_of_.assign(instance.num_nodes(), -1);
  for (int h = 0; h < num_hubs(); ++h) hub_of_[hub_nodes_[h]] = h;
  m_f_ = grids.m_f;
  width_ = grids.m_beta + 1;
  const size_t size = static_cast<size_t>(num_hubs()) * (m_f_ + 1) * width_;
  arrivals_.assign(size, Arrival{});
  departures_.assign(size, Departure{});
  stats_.hubs = num_hubs();
  stats_.layers = m_f_ + 1;
  stats_.soc_levels = width_;
  stats_.states = static_cast<long long>(size);
}

const SigmaTable::Arrival& SigmaTable::arrival(NodeIndex v, int r,
                                               int i) const {
  const int h = v >= 0 && v < static_cast<int>(hub_of_.size()) ? hub_of_[v] : -1;
  if (h < 0 || r < 0 || r > m_f_ || i < 0 || i >= width_) {
    throw Error(ErrorKind::kArgument, "sigma index out of range");
  }
  return arrivals_[Index(h, r, i)];
}

const SigmaTable::Departure& SigmaTable::departure(NodeIndex u, int r,
                                                   int i) const {
  const int h = u >= 0 && u < static_cast<int>(hub_of_.size()) ? hub_of_[u] : -1;
  if (h < 0 || r < 0 || r > m_f_ || i < 0 || i >= width_) {
    throw Error(ErrorKind::kArgument, "sigma index out of range");
  }
  return departures_[Index(h, r, i)];
}

std::optional<SigmaTable::Hop> SigmaTable::hop(NodeIndex v, int r,
                                               int i) const {
  const Arrival* a = &arrival(v, r, i);
  const int hv = hub_of_[v];
  while (a->via == Via::kInherited) a = &arrivals_[Index(hv, --r, i)];
  if (a->via != Via::kTravel) return std::nullopt;
  const int h = a->from_hub;
  const int i_depart = a->from_i;
  const Departure* d = &departures_[Index(h, r, i_depart)];
  while (d->via == Via::kInherited) d = &departures_[Index(h, --r, i_depart)];
  Hop hop;
  hop.u = hub_nodes_[h];
  hop.i_depart = i_depart;
  if (d->via == Via::kStart) {
    hop.start = true;
    hop.r_u = 0;
    hop.i_u = i_depart;
    return hop;
  }
  if (d->via != Via::kCharge) {
    throw Error(ErrorKind::kInternal, "arrival refers to an empty departure");
  }
  hop.r_u = d->from_r;
  hop.i_u = d->from_i;
  hop.f = r - d->from_r;
  hop.i_c = i_depart - d->from_i;
  hop.t_w = d->t_w;
  hop.t_c = d->t_c;
  return hop;
}

namespace {

// Lowest intensity on [lo, hi].
double MinIntensity(const PiecewiseFn& pi, double lo, double hi) {
  lo = std::clamp(lo, pi.domain_lo(), pi.domain_hi());
  hi = std::clamp(hi, pi.domain_lo(), pi.domain_hi());
  double m = std::min(pi(lo), pi(hi));
  for (const Breakpoint& p : pi.points()) {
    if (p.x >= lo && p.x <= hi) m = std::min(m, p.y);
  }
  return m;
}

}  // namespace

SigmaTable compute_sigma(const Instance& instance, const GridParams& grids,
                         const PsiTable& psi) {
  using Via = SigmaTable::Via;
  SigmaTable table(instance, grids);
  const int hubs = table.num_hubs();
  const int m_f = table.m_f_;
  const int cap = grids.cap_index;
  const int full = grids.full_index;
  const Hours deadline = instance.deadline();
  const Hours limit = deadline + kTol;

  // Phi^{-1} on the SoC grid for every station hub.
  std::vector<std::vector<Hours>> inverse(hubs);
  std::vector<const ChargingStation*> station(hubs, nullptr);
  for (int h = 0; h < hubs; ++h) {
    const NodeIndex v = table.hub_nodes_[h];
    if (!instance.is_station(v)) continue;
    station[h] = &instance.station_at(v);
    inverse[h].resize(full + 1);
    for (int i = 0; i <= full; ++i) {
      inverse[h][i] = station[h]->phi.InverseIncreasing(
          std::min(grids.soc(i), station[h]->capacity()));
    }
  }

  auto A = [&](int h, int r, int i) -> SigmaTable::Arrival& {
    return table.arrivals_[table.Index(h, r, i)];
  };
  auto D = [&](int h, int r, int i) -> SigmaTable::Departure& {
    return table.departures_[table.Index(h, r, i)];
  };

  const int s_hub = table.hub_of_[instance.source()];
  A(s_hub, 0, cap) = {0.0, Via::kStart, -1, -1};
  D(s_hub, 0, cap) = {0.0, Via::kStart, -1, -1, 0.0, 0.0};

  const size_t slots = static_cast<size_t>(hubs) * (cap + 1);
  std::vector<char> dep_queued(slots, 0);
  std::vector<char> arr_queued(slots, 0);
  std::deque<std::pair<int, int>> dep_work;
  std::deque<std::pair<int, int>> arr_work;
  auto queue_departure = [&](int h, int i) {
    char& flag = dep_queued[static_cast<size_t>(h) * (cap + 1) + i];
    if (!flag) {
      flag = 1;
      dep_work.emplace_back(h, i);
    }
  };
  auto queue_arrival = [&](int h, int i) {
    if (station[h] == nullptr) return;
    char& flag = arr_queued[static_cast<size_t>(h) * (cap + 1) + i];
    if (!flag) {
      flag = 1;
      arr_work.emplace_back(h, i);
    }
  };

  for (int r = 0; r <= m_f; ++r) {
    if (r == 0) {
      queue_departure(s_hub, cap);
      queue_arrival(s_hub, cap);
    } else {
      for (int h = 0; h < hubs; ++h) {
        for (int i = 0; i <= cap; ++i) {
          const SigmaTable::Arrival& prev_a = A(h, r - 1, i);
          if (prev_a.time < kInf) A(h, r, i) = {prev_a.time, Via::kInherited};
          const SigmaTable::Departure& prev_d = D(h, r - 1, i);
          SigmaTable::Departure& d = D(h, r, i);
          if (d.time < prev_d.time) {
            queue_departure(h, i);
          } else if (prev_d.time < kInf) {
            d = SigmaTable::Departure{};
            d.time = prev_d.time;
            d.via = Via::kInherited;
          }
        }
      }
    }

    while (!dep_work.empty() || !arr_work.empty()) {
      while (!dep_work.empty()) {
        const auto [h, i_dep] = dep_work.front();
        dep_work.pop_front();
        dep_queued[static_cast<size_t>(h) * (cap + 1) + i_dep] = 0;
        const Hours start = D(h, r, i_dep).time;
        const PsiTable::Row& row = psi.row(table.hub_nodes_[h], i_dep);
        for (int k : row.hub_entries) {
          const PsiTable::Entry& e = row.entries[k];
          if (e.edge < 0) continue;
          ++table.stats_.travel_relaxations;
          const Hours t = start + e.time;
          if (t > limit) continue;
          const int hv = table.hub_of_[e.v];
          SigmaTable::Arrival& a = A(hv, r, e.i);
          if (t < a.time) {
            a = {t, Via::kTravel, h, i_dep};
            queue_arrival(hv, e.i);
          } else if (t == a.time && a.via == Via::kTravel &&
                     std::tie(h, i_dep) < std::tie(a.from_hub, a.from_i)) {
            a.from_hub = h;
            a.from_i = i_dep;
          }
        }
      }
      while (!arr_work.empty()) {
        const auto [h, i] = arr_work.front();
        arr_work.pop_front();
        arr_queued[static_cast<size_t>(h) * (cap + 1) + i] = 0;
        const ChargingStation& st = *station[h];
        const Hours tau = A(h, r, i).time;
        for (int target = i + 1; target <= full; ++target) {
          const Hours t_c = inverse[h][target] - inverse[h][i];
          if (t_c > st.tc_ub + kTol) break;
          if (tau + st.tw_lb + t_c > limit) break;
          ++table.stats_.charge_pairs;
          const Kwh energy = (target - i) * grids.delta_beta;
          const double scale = energy / st.eta / grids.delta_f;
          const double low =
              MinIntensity(st.pi, tau + st.tw_lb, tau + st.tw_ub) * scale;
          const double high = st.pi(tau + st.tw_lb) * scale;
          const long long f_first = std::max<long long>(0, StableFloor(low));
          const long long f_last =
              std::min<long long>(m_f - r, StableCeil(high) + 1);
          Hours previous = kInf;
          for (long long f = f_first; f <= f_last; ++f) {
            ++table.stats_.wait_queries;
            const std::optional<Hours> t_w = min_wait_for_energy(
                st, energy, tau, static_cast<double>(f) * grids.delta_f);
            if (!t_w || *t_w >= previous) continue;
            previous = *t_w;
            const Hours time = tau + *t_w + t_c;
            if (time <= limit) {
              SigmaTable::Departure& d = D(h, r + static_cast<int>(f), target);
              if (time < d.time) {
                d = {time, Via::kCharge, r, i, *t_w, t_c};
                if (f == 0) queue_departure(h, target);
              }
            }
            if (*t_w <= st.tw_lb) break;
          }
        }
      }
    }
  }
  return table;
}

std::optional<Recovered> recover_solution(const Instance& instance,
                                          const GridParams& grids,
                                          const PsiTable& psi,
                                          const SigmaTable& sigma) {
  using Via = SigmaTable::Via;
  const NodeIndex dest = instance.dest();
  const int cap = grids.cap_index;
  int r_star = -1;
  int i_star = -1;
  for (int r = 0; r <= sigma.m_f() && r_star < 0; ++r) {
    Hours best = kInf;
    for (int i = cap; i >= 0; --i) {
      const Hours t = sigma.sigma(dest, r, i);
      if (t < best) {
        best = t;
        i_star = i;
      }
    }
    if (best <= instance.deadline() + kTol) r_star = r;
  }
  if (r_star < 0) return std::nullopt;

  std::vector<Segment> segments;
  std::vector<Stop> stops;
  NodeIndex v = dest;
  int r = r_star;
  int i = i_star;
  for (int guard = 0;; ++guard) {
    if (guard > (sigma.m_f() + 1) * (cap + 2) * sigma.num_hubs()) {
      throw Error(ErrorKind::kInternal, "backpointer cycle in plan recovery");
    }
    const SigmaTable::Arrival* a = &sigma.arrival(v, r, i);
    while (a->via == Via::kInherited) a = &sigma.arrival(v, --r, i);
    if (a->via == Via::kStart) break;
    if (a->via != Via::kTravel) {
      throw Error(ErrorKind::kInternal, "broken arrival backpointer");
    }
    const NodeIndex u = sigma.hub_node(a->from_hub);
    const int i_dep = a->from_i;
    segments.push_back(extract_segment(psi, u, i_dep, v, i));
    const SigmaTable::Departure* d = &sigma.departure(u, r, i_dep);
    while (d->via == Via::kInherited) d = &sigma.departure(u, --r, i_dep);
    if (d->via == Via::kStart) break;
    if (d->via != Via::kCharge) {
      throw Error(ErrorKind::kInternal, "broken departure backpointer");
    }
    stops.push_back({0, d->t_w, d->t_c});
    v = u;
    r = d->from_r;
    i = d->from_i;
  }
  std::reverse(segments.begin(), segments.end());
  std::reverse(stops.begin(), stops.end());

  SolutionProfile sol;
  sol.path.push_back(instance.source());
  for (size_t k = 0; k < segments.size(); ++k) {
    const Segment& seg = segments[k];
    if (seg.nodes.front() != sol.path.back()) {
      throw Error(ErrorKind::kInternal, "segments do not chain");
    }
    if (k > 0) {
      Stop stop = stops[k - 1];
      stop.index = static_cast<int>(sol.path.size()) - 1;
      sol.stops.push_back(stop);
    }
    sol.path.insert(sol.path.end(), seg.nodes.begin() + 1, seg.nodes.end());
    sol.edges.insert(sol.edges.end(), seg.edges.begin(), seg.edges.end());
    sol.travel.insert(sol.travel.end(), seg.times.begin(), seg.times.end());
  }
  if (sol.path.back() != dest) {
    throw Error(ErrorKind::kInternal, "recovered plan misses the destination");
  }

  ValidationOptions options;
  options.capacity = grids.beta0_hat;
  options.initial_soc = grids.beta0_hat;
  ValidationReport report = validate_solution(instance, sol, options);
  if (!report.ok) {
    throw Error(ErrorKind::kInternal,
                std::string("recovered plan fails ") +
                    ToString(report.first_violation->constraint) + ": " +
                    report.first_violation->detail);
  }
  return Recovered{std::move(report.evaluated), r_star, i_star};
}

}  // namespace cfo
