#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "termcut/graph.hpp"
#include "termcut/planar.hpp"
#include "termcut/quality.hpp"

namespace termcut {

using json = nlohmann::json;

// Graph file, schema 1. Weights are exact rational strings; multiplicity is
// written only when above one. Embedded instances add per-vertex rotation
// lists (neighbor ids in drawing order; the j-th occurrence of a neighbor
// refers to the j-th parallel edge record) and the directed outer_face pair.
struct LoadedGraph {
  Instance g;
  std::optional<EmbeddedInstance> embedded;
  std::map<std::string, std::string> labels;
};

inline json graph_to_json(const Instance& g,
                          const std::map<std::string, std::string>& labels = {}) {
  json j;
  j["schema"] = 1;
  std::vector<std::string> vids = g.ids;
  std::sort(vids.begin(), vids.end());
  j["vertices"] = vids;
  j["terminals"] = g.terminal_ids();
  json edges = json::array();
  for (const auto& e : g.edges) {
    json rec;
    rec["u"] = g.ids[e.u];
    rec["v"] = g.ids[e.v];
    rec["w"] = format_weight(e.w);
    if (e.mult > 1) rec["mult"] = e.mult;
    edges.push_back(rec);
  }
  j["edges"] = edges;
  if (!labels.empty()) j["labels"] = labels;
  return j;
}

inline json graph_to_json(const EmbeddedInstance& e,
                          const std::map<std::string, std::string>& labels = {}) {
  json j = graph_to_json(e.g, labels);
  json rot = json::object();
  for (int v = 0; v < e.g.n(); ++v) {
    json list = json::array();
    for (int d : e.rot[v]) list.push_back(e.g.ids[e.head(d)]);
    rot[e.g.ids[v]] = list;
  }
  j["rotation"] = rot;
  j["outer_face"] = {e.g.ids[e.tail(e.outer_dart)], e.g.ids[e.head(e.outer_dart)]};
  return j;
}

inline LoadedGraph graph_from_json(const json& j) {
  if (!j.is_object()) throw input_error("graph file must be a JSON object");
  if (!j.contains("schema") || j["schema"] != 1)
    throw input_error("graph file must declare schema 1");
  for (const auto& field : {"vertices", "terminals", "edges"})
    if (!j.contains(field)) throw input_error(std::string("graph file misses ") + field);

  std::vector<std::string> vids, tids;
  for (const auto& v : j["vertices"]) vids.push_back(v.get<std::string>());
  for (const auto& t : j["terminals"]) tids.push_back(t.get<std::string>());
  std::vector<EdgeSpec> specs;
  for (const auto& rec : j["edges"]) {
    EdgeSpec s;
    s.u = rec.at("u").get<std::string>();
    s.v = rec.at("v").get<std::string>();
    if (rec.at("w").is_number_integer())
      s.w = Weight(rec["w"].get<long>());
    else
      s.w = parse_weight(rec.at("w").get<std::string>());
    s.mult = rec.contains("mult") ? rec["mult"].get<long>() : 1;
    specs.push_back(s);
  }

  LoadedGraph out;
  out.g = make_instance(vids, tids, specs);
  if (j.contains("labels"))
    for (const auto& [id, label] : j["labels"].items())
      out.labels[id] = label.get<std::string>();

  if (j.contains("rotation") != j.contains("outer_face"))
    throw input_error("rotation and outer_face must come together");
  if (j.contains("rotation")) {
    std::map<std::string, std::vector<std::string>> rot;
    for (const auto& [id, list] : j["rotation"].items()) {
      auto& entry = rot[id];
      for (const auto& nid : list) entry.push_back(nid.get<std::string>());
    }
    const auto& of = j["outer_face"];
    if (!of.is_array() || of.size() != 2)
      throw input_error("outer_face must name a directed edge [u, v]");
    out.embedded = make_embedded(out.g, rot, {of[0].get<std::string>(), of[1].get<std::string>()});
  }
  return out;
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw input_error(path + ": " + e.what());
  }
  return j;
}

inline LoadedGraph load_graph(const std::string& path) {
  return graph_from_json(read_json_file(path));
}

inline void write_json_file(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw input_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

// Vertex partition file: {"classes": [["a", "b"], ["c"]]}.
inline std::vector<std::vector<std::string>> partition_from_json(const json& j) {
  if (!j.is_object() || !j.contains("classes"))
    throw input_error("partition file must hold a classes array");
  std::vector<std::vector<std::string>> classes;
  for (const auto& cls : j["classes"]) {
    std::vector<std::string> ids;
    for (const auto& id : cls) ids.push_back(id.get<std::string>());
    classes.push_back(ids);
  }
  return classes;
}

inline json partition_to_json(const ContractionMap& cm) {
  json classes = json::array();
  for (const auto& cls : cm.classes) classes.push_back(cls);
  return json{{"classes", classes}};
}

inline json quality_to_json(const QualityReport& q) {
  json j;
  j["value"] = format_weight(q.quality);
  j["value_approx"] = to_double(q.quality);
  j["infinite"] = q.infinite;
  j["exhaustive"] = q.exhaustive;
  j["lower_violations"] = q.lower_violations.size();
  if (!q.witness.side_a.empty())
    j["witness"] = {{"side_a", q.witness.side_a}, {"side_b", q.witness.side_b}};
  return j;
}

// Run report: everything a run needs to be reproduced and audited. Keys are
// emitted sorted, so two runs differ only in wall_clock_ms.
inline json make_report(const std::string& command, uint64_t seed, const Instance& input,
                        const Instance& output, const QualityReport* quality, long wall_ms) {
  json j;
  j["command"] = command;
  j["seed"] = seed;
  j["input"] = {{"vertices", input.n()}, {"edges", input.m()}, {"terminals", input.k()}};
  j["output"] = {{"vertices", output.n()}, {"edges", output.m()}, {"terminals", output.k()}};
  j["quality"] = quality ? quality_to_json(*quality) : json();
  j["wall_clock_ms"] = wall_ms;
  return j;
}

}  // namespace termcut
