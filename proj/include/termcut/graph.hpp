#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "termcut/rational.hpp"

namespace termcut {

// Undirected weighted edge record. Parallel edges between the same endpoints
// are legal and kept as distinct records; mult is a further multiplicity on a
// single record (mult parallel copies of weight w each). Cuts treat a record
// as capacity w * mult.
struct Edge {
  int u = -1;
  int v = -1;
  Weight w;
  long mult = 1;
};

// A weighted multigraph with a distinguished ordered terminal list.
// Vertices are named by string ids; all algorithms work on dense indices.
struct Instance {
  std::vector<std::string> ids;       // index -> id
  std::map<std::string, int> index;   // id -> index
  std::vector<int> terminals;         // terminal indices, list order is part of the interface
  std::vector<char> is_terminal;      // per vertex
  std::vector<Edge> edges;

  int n() const { return static_cast<int>(ids.size()); }
  int m() const { return static_cast<int>(edges.size()); }
  int k() const { return static_cast<int>(terminals.size()); }

  int index_of(const std::string& id) const {
    auto it = index.find(id);
    if (it == index.end()) throw input_error("unknown vertex id: " + id);
    return it->second;
  }

  const std::string& terminal_id(int pos) const { return ids[terminals[pos]]; }

  std::vector<std::string> terminal_ids() const {
    std::vector<std::string> out;
    out.reserve(terminals.size());
    for (int t : terminals) out.push_back(ids[t]);
    return out;
  }

  // Non-terminal indices in ascending id order. Grouping and output naming
  // iterate in this order so results do not depend on construction order.
  std::vector<int> sorted_nonterminals() const {
    std::vector<int> out;
    for (int i = 0; i < n(); ++i)
      if (!is_terminal[i]) out.push_back(i);
    std::sort(out.begin(), out.end(),
              [&](int a, int b) { return ids[a] < ids[b]; });
    return out;
  }
};

struct EdgeSpec {
  std::string u, v;
  Weight w;
  long mult = 1;
};

// Validating constructor. Rejects duplicate ids, unknown or duplicate
// terminals, self loops, negative weights and nonpositive multiplicities.
// Zero-weight edges are dropped.
inline Instance make_instance(const std::vector<std::string>& vertex_ids,
                              const std::vector<std::string>& terminal_ids,
                              const std::vector<EdgeSpec>& edge_specs) {
  Instance g;
  g.ids = vertex_ids;
  for (int i = 0; i < g.n(); ++i) {
    if (g.ids[i].empty()) throw input_error("empty vertex id");
    if (!g.index.emplace(g.ids[i], i).second)
      throw input_error("duplicate vertex id: " + g.ids[i]);
  }
  g.is_terminal.assign(g.n(), 0);
  for (const auto& t : terminal_ids) {
    int i = g.index_of(t);
    if (g.is_terminal[i]) throw input_error("duplicate terminal: " + t);
    g.is_terminal[i] = 1;
    g.terminals.push_back(i);
  }
  for (const auto& e : edge_specs) {
    int u = g.index_of(e.u), v = g.index_of(e.v);
    if (u == v) throw input_error("self loop at " + e.u);
    if (e.w < 0) throw input_error("negative edge weight on " + e.u + "-" + e.v);
    if (e.mult < 1) throw input_error("nonpositive edge multiplicity on " + e.u + "-" + e.v);
    if (e.w == 0) continue;
    g.edges.push_back(Edge{u, v, e.w, e.mult});
  }
  return g;
}

// Exact total edge weight, multiplicities included.
inline Weight total_weight(const Instance& g) {
  Weight sum = 0;
  for (const auto& e : g.edges) sum += e.w * e.mult;
  return sum;
}

// True when no edge joins two non-terminals.
inline bool is_quasi_bipartite(const Instance& g) {
  for (const auto& e : g.edges)
    if (!g.is_terminal[e.u] && !g.is_terminal[e.v]) return false;
  return true;
}

// Connected component label per vertex, labels numbered by smallest member.
inline std::vector<int> components(const Instance& g) {
  std::vector<std::vector<int>> adj(g.n());
  for (const auto& e : g.edges) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  std::vector<int> comp(g.n(), -1);
  int label = 0;
  std::vector<int> stack;
  for (int s = 0; s < g.n(); ++s) {
    if (comp[s] >= 0) continue;
    comp[s] = label;
    stack.push_back(s);
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int w : adj[v])
        if (comp[w] < 0) {
          comp[w] = label;
          stack.push_back(w);
        }
    }
    ++label;
  }
  return comp;
}

// The star around v: v, its neighbors, and every edge incident to v.
// Terminal order of the star follows the parent instance.
inline Instance star_of(const Instance& g, const std::string& center_id) {
  int c = g.index_of(center_id);
  std::set<int> keep{c};
  std::vector<EdgeSpec> specs;
  for (const auto& e : g.edges) {
    if (e.u != c && e.v != c) continue;
    keep.insert(e.u);
    keep.insert(e.v);
    specs.push_back(EdgeSpec{g.ids[e.u], g.ids[e.v], e.w, e.mult});
  }
  std::vector<std::string> vids;
  for (int i = 0; i < g.n(); ++i)
    if (keep.count(i)) vids.push_back(g.ids[i]);
  std::vector<std::string> tids;
  for (int t : g.terminals)
    if (keep.count(t)) tids.push_back(g.ids[t]);
  return make_instance(vids, tids, specs);
}

// A partition of the vertex set into classes, each contracted to one
// supernode named by its representative.
struct ContractionMap {
  std::vector<std::vector<std::string>> classes;
  std::vector<std::string> representatives;  // parallel to classes
};

// Builds a map from class lists alone. The representative is the class's
// terminal if it has one, otherwise its smallest id.
inline ContractionMap make_contraction(const Instance& g,
                                       const std::vector<std::vector<std::string>>& classes) {
  ContractionMap m;
  m.classes = classes;
  for (const auto& cls : classes) {
    if (cls.empty()) throw input_error("empty contraction class");
    std::string rep;
    for (const auto& id : cls) {
      int i = g.index_of(id);
      if (g.is_terminal[i]) {
        if (!rep.empty()) throw input_error("contraction class merges terminals " + rep + " and " + id);
        rep = id;
      }
    }
    if (rep.empty()) rep = *std::min_element(cls.begin(), cls.end());
    m.representatives.push_back(rep);
  }
  return m;
}

inline ContractionMap identity_contraction(const Instance& g) {
  std::vector<std::vector<std::string>> classes;
  classes.reserve(g.n());
  for (const auto& id : g.ids) classes.push_back({id});
  return make_contraction(g, classes);
}

// Contracts each class to its representative. Requires the classes to
// partition the vertex set with at most one terminal per class. Self loops
// produced by the contraction are discarded; parallel records are kept.
inline Instance contract(const Instance& g, const ContractionMap& m) {
  if (m.classes.size() != m.representatives.size())
    throw input_error("contraction classes and representatives differ in length");
  std::vector<int> cls_of(g.n(), -1);
  for (size_t c = 0; c < m.classes.size(); ++c) {
    if (m.classes[c].empty()) throw input_error("empty contraction class");
    int terminals_here = 0;
    for (const auto& id : m.classes[c]) {
      int i = g.index_of(id);
      if (cls_of[i] >= 0) throw input_error("vertex in two contraction classes: " + id);
      cls_of[i] = static_cast<int>(c);
      if (g.is_terminal[i]) ++terminals_here;
    }
    if (terminals_here > 1) throw input_error("contraction class merges two terminals");
  }
  for (int i = 0; i < g.n(); ++i)
    if (cls_of[i] < 0) throw input_error("vertex missing from contraction: " + g.ids[i]);

  std::set<std::string> rep_seen;
  for (const auto& r : m.representatives)
    if (!rep_seen.insert(r).second) throw input_error("duplicate representative: " + r);

  // Terminals keep their list order; each maps to its class representative.
  std::vector<std::string> tids;
  for (int t : g.terminals) tids.push_back(m.representatives[cls_of[t]]);

  std::vector<std::string> vids = m.representatives;
  std::sort(vids.begin(), vids.end());
  std::vector<EdgeSpec> specs;
  for (const auto& e : g.edges) {
    const std::string& ru = m.representatives[cls_of[e.u]];
    const std::string& rv = m.representatives[cls_of[e.v]];
    if (ru == rv) continue;
    specs.push_back(EdgeSpec{ru, rv, e.w, e.mult});
  }
  return make_instance(vids, tids, specs);
}

}  // namespace termcut
