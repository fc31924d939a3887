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

#include "cfo/instance_io.h"

#include <fstream>
#include <initializer_list>
#include <map>
#include <sstream>

#include "json.hpp"

namespace cfo {
namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void ParseFail(const std::string& path, const std::string& msg) {
  throw Error(ErrorKind::kParse, (path.empty() ? "document" : path) + ": " + msg);
}

std::string Join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string At(const std::string& path, size_t index) {
  return path + "[" + std::to_string(index) + "]";
}

void ExpectObject(const Json& j, const std::string& path,
                  std::initializer_list<const char*> keys) {
  if (!j.is_object()) ParseFail(path, "expected an object");
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* key : keys) known = known || item.key() == key;
    if (!known) ParseFail(Join(path, item.key()), "unknown field");
  }
}

const Json& Field(const Json& j, const char* key, const std::string& path) {
  auto it = j.find(key);
  if (it == j.end()) ParseFail(Join(path, key), "missing field");
  return *it;
}

double Number(const Json& j, const std::string& path) {
  if (!j.is_number()) ParseFail(path, "expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) ParseFail(path, "expected a finite number");
  return x;
}

double NumberField(const Json& j, const char* key, const std::string& path) {
  return Number(Field(j, key, path), Join(path, key));
}

long long Integer(const Json& j, const std::string& path) {
  if (j.is_number_integer()) return j.get<long long>();
  ParseFail(path, "expected an integer");
}

std::string String(const Json& j, const std::string& path) {
  if (!j.is_string()) ParseFail(path, "expected a string");
  return j.get<std::string>();
}

PiecewiseFn Curve(const Json& j, const std::string& path, Shape shape) {
  if (!j.is_array() || j.empty()) {
    ParseFail(path, "expected a non-empty list of [x, y] breakpoints");
  }
  std::vector<Breakpoint> points;
  for (size_t k = 0; k < j.size(); ++k) {
    const Json& p = j[k];
    if (!p.is_array() || p.size() != 2) {
      ParseFail(At(path, k), "expected an [x, y] pair");
    }
    points.push_back({Number(p[0], At(path, k) + "[0]"),
                      Number(p[1], At(path, k) + "[1]")});
  }
  try {
    return PiecewiseFn(std::move(points), shape);
  } catch (const Error& e) {
    ParseFail(path, e.what());
  }
}

Json CurveJson(const PiecewiseFn& f) {
  Json out = Json::array();
  for (const Breakpoint& p : f.points()) out.push_back(Json::array({p.x, p.y}));
  return out;
}

Json ParseDocument(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    ParseFail("", std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

Instance parse_instance(const std::string& text) {
  const Json doc = ParseDocument(text);
  ExpectObject(doc, "", {"units", "nodes", "edges", "stations", "query"});

  const Json& units = Field(doc, "units", "");
  ExpectObject(units, "units", {"time", "energy", "intensity"});
  const std::pair<const char*, const char*> expected[] = {
      {"time", "h"}, {"energy", "kWh"}, {"intensity", "kg/kWh"}};
  for (const auto& [key, value] : expected) {
    const std::string path = Join("units", key);
    if (String(Field(units, key, "units"), path) != value) {
      ParseFail(path, std::string("unsupported unit, expected \"") + value +
                          "\"");
    }
  }

  const Json& nodes = Field(doc, "nodes", "");
  if (!nodes.is_array() || nodes.empty()) {
    ParseFail("nodes", "expected a non-empty list");
  }
  std::vector<long long> ids;
  std::vector<NodeKind> kinds;
  std::map<long long, NodeIndex> index;
  for (size_t k = 0; k < nodes.size(); ++k) {
    const std::string path = At("nodes", k);
    ExpectObject(nodes[k], path, {"id", "kind"});
    const long long id = Integer(Field(nodes[k], "id", path), Join(path, "id"));
    const std::string kind =
        String(Field(nodes[k], "kind", path), Join(path, "kind"));
    if (kind != "road" && kind != "charging") {
      ParseFail(Join(path, "kind"), "expected \"road\" or \"charging\"");
    }
    if (!index.emplace(id, static_cast<NodeIndex>(k)).second) {
      ParseFail(Join(path, "id"), "duplicate node id " + std::to_string(id));
    }
    ids.push_back(id);
    kinds.push_back(kind == "road" ? NodeKind::kRoad : NodeKind::kCharging);
  }
  auto node_ref = [&index](const Json& j, const std::string& path) {
    const long long id = Integer(j, path);
    auto it = index.find(id);
    if (it == index.end()) ParseFail(path, "unknown node id " + std::to_string(id));
    return it->second;
  };

  const Json& edges_json = Field(doc, "edges", "");
  if (!edges_json.is_array()) ParseFail("edges", "expected a list");
  std::vector<Edge> edges;
  for (size_t k = 0; k < edges_json.size(); ++k) {
    const std::string path = At("edges", k);
    const Json& e = edges_json[k];
    ExpectObject(e, path, {"tail", "head", "t_lb", "t_ub", "energy"});
    Edge edge;
    edge.tail = node_ref(Field(e, "tail", path), Join(path, "tail"));
    edge.head = node_ref(Field(e, "head", path), Join(path, "head"));
    if (edge.tail == edge.head) ParseFail(path, "self-loops are not allowed");
    edge.t_lb = NumberField(e, "t_lb", path);
    edge.t_ub = NumberField(e, "t_ub", path);
    if (!(edge.t_lb > 0.0)) ParseFail(Join(path, "t_lb"), "must be positive");
    if (edge.t_ub < edge.t_lb) ParseFail(Join(path, "t_ub"), "below t_lb");
    edge.energy = Curve(Field(e, "energy", path), Join(path, "energy"),
                        Shape::kNonIncreasing);
    if (std::fabs(edge.energy.domain_lo() - edge.t_lb) > kTol ||
        std::fabs(edge.energy.domain_hi() - edge.t_ub) > kTol) {
      ParseFail(Join(path, "energy"), "breakpoints must span [t_lb, t_ub]");
    }
    if (edge.energy.has_jumps()) {
      ParseFail(Join(path, "energy"), "curve must be continuous");
    }
    edges.push_back(std::move(edge));
  }

  const Json& query = Field(doc, "query", "");
  ExpectObject(query, "query", {"source", "dest", "deadline", "capacity"});
  const NodeIndex source = node_ref(Field(query, "source", "query"), "query.source");
  const NodeIndex dest = node_ref(Field(query, "dest", "query"), "query.dest");
  const Hours deadline = NumberField(query, "deadline", "query");
  const Kwh capacity = NumberField(query, "capacity", "query");
  if (deadline < 0.0) ParseFail("query.deadline", "must be non-negative");
  if (!(capacity > 0.0)) ParseFail("query.capacity", "must be positive");

  const Json& stations_json = Field(doc, "stations", "");
  if (!stations_json.is_array()) ParseFail("stations", "expected a list");
  std::vector<ChargingStation> stations;
  for (size_t k = 0; k < stations_json.size(); ++k) {
    const std::string path = At("stations", k);
    const Json& s = stations_json[k];
    ExpectObject(s, path,
                 {"node", "phi", "pi", "tw_lb", "tw_ub", "tc_ub", "eta"});
    ChargingStation st;
    st.node = node_ref(Field(s, "node", path), Join(path, "node"));
    if (kinds[st.node] != NodeKind::kCharging) {
      ParseFail(Join(path, "node"), "node is not a charging node");
    }
    st.phi = Curve(Field(s, "phi", path), Join(path, "phi"),
                   Shape::kNonDecreasingConcave);
    st.pi = Curve(Field(s, "pi", path), Join(path, "pi"),
                  Shape::kPiecewiseMonotone);
    st.tw_lb = NumberField(s, "tw_lb", path);
    st.tw_ub = NumberField(s, "tw_ub", path);
    st.tc_ub = NumberField(s, "tc_ub", path);
    st.eta = NumberField(s, "eta", path);
    if (st.phi.points().size() < 2 || st.phi.points().front().x != 0.0 ||
        st.phi.points().front().y != 0.0) {
      ParseFail(Join(path, "phi"), "must start at [0, 0] and rise");
    }
    if (std::fabs(st.capacity() - capacity) > kTol) {
      ParseFail(Join(path, "phi"), "must top out at query.capacity");
    }
    if (st.pi.min_value() < 0.0) ParseFail(Join(path, "pi"), "negative intensity");
    if (st.tw_lb < 0.0) ParseFail(Join(path, "tw_lb"), "must be non-negative");
    if (st.tw_ub < st.tw_lb) ParseFail(Join(path, "tw_ub"), "below tw_lb");
    if (st.tc_ub < 0.0) ParseFail(Join(path, "tc_ub"), "must be non-negative");
    if (!(st.eta > 0.0 && st.eta <= 1.0)) {
      ParseFail(Join(path, "eta"), "must lie in (0, 1]");
    }
    if (st.pi.domain_lo() > 0.0 || st.pi.domain_hi() < deadline + st.tw_ub - kTol) {
      ParseFail(Join(path, "pi"),
                "must cover [0, query.deadline + tw_ub]");
    }
    stations.push_back(std::move(st));
  }

  try {
    return Instance(std::move(ids), std::move(kinds), std::move(edges),
                    std::move(stations), source, dest, deadline, capacity);
  } catch (const Error& e) {
    ParseFail("", e.what());
  }
}

Instance read_instance_file(const std::string& path) {
  return parse_instance(read_text_file(path));
}

std::string serialize_instance(const Instance& instance) {
  Json doc;
  doc["units"] = {{"time", "h"}, {"energy", "kWh"}, {"intensity", "kg/kWh"}};
  Json nodes = Json::array();
  for (NodeIndex v = 0; v < instance.num_nodes(); ++v) {
    nodes.push_back({{"id", instance.node_id(v)},
                     {"kind", ToString(instance.kind(v))}});
  }
  doc["nodes"] = std::move(nodes);
  Json edges = Json::array();
  for (const Edge& e : instance.edges()) {
    edges.push_back({{"tail", instance.node_id(e.tail)},
                     {"head", instance.node_id(e.head)},
                     {"t_lb", e.t_lb},
                     {"t_ub", e.t_ub},
                     {"energy", CurveJson(e.energy)}});
  }
  doc["edges"] = std::move(edges);
  Json stations = Json::array();
  for (const ChargingStation& st : instance.stations()) {
    stations.push_back({{"node", instance.node_id(st.node)},
                        {"phi", CurveJson(st.phi)},
                        {"pi", CurveJson(st.pi)},
                        {"tw_lb", st.tw_lb},
                        {"tw_ub", st.tw_ub},
                        {"tc_ub", st.tc_ub},
                        {"eta", st.eta}});
  }
  doc["stations"] = std::move(stations);
  doc["query"] = {{"source", instance.node_id(instance.source())},
                  {"dest", instance.node_id(instance.dest())},
                  {"deadline", instance.deadline()},
                  {"capacity", instance.capacity()}};
  return doc.dump(2) + "\n";
}

SolutionProfile parse_solution(const Instance& instance,
                               const std::string& text) {
  const Json doc = ParseDocument(text);
  if (!doc.is_object()) ParseFail("", "expected an object");
  const Json& body = doc.contains("solution") ? doc["solution"] : doc;
  const std::string root = doc.contains("solution") ? "solution" : "";
  if (!body.is_object()) ParseFail(root, "expected an object");
  SolutionProfile sol;
  const Json& path = Field(body, "path", root);
  if (!path.is_array()) ParseFail(Join(root, "path"), "expected a list");
  for (size_t k = 0; k < path.size(); ++k) {
    const std::string where = At(Join(root, "path"), k);
    const long long id = Integer(path[k], where);
    try {
      sol.path.push_back(instance.index_of(id));
    } catch (const Error&) {
      ParseFail(where, "unknown node id " + std::to_string(id));
    }
  }
  const Json& edges = Field(body, "edges", root);
  if (!edges.is_array()) ParseFail(Join(root, "edges"), "expected a list");
  for (size_t k = 0; k < edges.size(); ++k) {
    const std::string where = At(Join(root, "edges"), k);
    const long long e = Integer(edges[k], where);
    if (e < 0 || e >= instance.num_edges()) ParseFail(where, "unknown edge");
    sol.edges.push_back(static_cast<EdgeIndex>(e));
  }
  const Json& travel = Field(body, "travel", root);
  if (!travel.is_array()) ParseFail(Join(root, "travel"), "expected a list");
  for (size_t k = 0; k < travel.size(); ++k) {
    sol.travel.push_back(Number(travel[k], At(Join(root, "travel"), k)));
  }
  const Json& stops = Field(body, "stops", root);
  if (!stops.is_array()) ParseFail(Join(root, "stops"), "expected a list");
  for (size_t k = 0; k < stops.size(); ++k) {
    const std::string where = At(Join(root, "stops"), k);
    const Json& s = stops[k];
    if (!s.is_object()) ParseFail(where, "expected an object");
    Stop stop;
    const long long index = Integer(Field(s, "index", where), Join(where, "index"));
    if (index < 0 || index >= static_cast<long long>(sol.path.size())) {
      ParseFail(Join(where, "index"), "outside the path");
    }
    stop.index = static_cast<int>(index);
    if (s.contains("node")) {
      const long long id = Integer(s["node"], Join(where, "node"));
      if (instance.node_id(sol.path[stop.index]) != id) {
        ParseFail(Join(where, "node"), "does not match path[index]");
      }
    }
    stop.wait = NumberField(s, "wait", where);
    stop.charge = NumberField(s, "charge", where);
    sol.stops.push_back(stop);
  }
  return sol;
}

SolutionProfile read_solution_file(const Instance& instance,
                                   const std::string& path) {
  return parse_solution(instance, read_text_file(path));
}

std::string serialize_solution(const Instance& instance,
                               const SolutionProfile& sol) {
  Json doc;
  Json path = Json::array();
  for (NodeIndex v : sol.path) path.push_back(instance.node_id(v));
  doc["path"] = std::move(path);
  doc["edges"] = sol.edges;
  doc["travel"] = sol.travel;
  Json stops = Json::array();
  for (const Stop& s : sol.stops) {
    stops.push_back({{"index", s.index},
                     {"node", instance.node_id(sol.path[s.index])},
                     {"wait", s.wait},
                     {"charge", s.charge}});
  }
  doc["stops"] = std::move(stops);
  doc["derived"] = {{"soc", sol.soc},
                    {"arrival", sol.arrival},
                    {"charge_start", sol.charge_start},
                    {"stop_footprints", sol.stop_footprints},
                    {"footprint", sol.footprint},
                    {"elapsed", sol.elapsed},
                    {"max_soc", sol.max_soc}};
  return doc.dump(2) + "\n";
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kArgument, "cannot read " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kArgument, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorKind::kArgument, "failed writing " + path);
}

}  // namespace cfo
