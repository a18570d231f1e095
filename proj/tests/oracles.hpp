// Brute-force reference implementations for the test suite. Everything here
// enumerates; nothing shares code with the library's flow or duality paths.
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "termcut/graph.hpp"
#include "termcut/planar.hpp"

namespace termcut::oracle {

// Minimum crossing weight over every completion of the fixed terminal sides.
// side_a holds terminal mask bits; non-terminals take all 2^f assignments.
inline Weight brute_min_cut(const Instance& g, uint64_t mask) {
  std::vector<int> free_vertex;
  std::vector<char> side(g.n(), 0);
  for (int v = 0; v < g.n(); ++v) {
    if (g.is_terminal[v]) continue;
    free_vertex.push_back(v);
  }
  for (int i = 0; i < g.k(); ++i)
    side[g.terminals[i]] = (mask >> i) & 1 ? 1 : 0;

  Weight best;
  bool have = false;
  const uint64_t lim = 1ull << free_vertex.size();
  for (uint64_t bits = 0; bits < lim; ++bits) {
    for (size_t i = 0; i < free_vertex.size(); ++i)
      side[free_vertex[i]] = (bits >> i) & 1;
    Weight cross = 0;
    for (const auto& e : g.edges)
      if (side[e.u] != side[e.v]) cross += e.w * e.mult;
    if (!have || cross < best) {
      best = cross;
      have = true;
    }
  }
  return best;
}

inline Weight brute_min_cut(const Instance& g, const std::vector<std::string>& side_a) {
  uint64_t mask = 0;
  std::set<std::string> a(side_a.begin(), side_a.end());
  for (int i = 0; i < g.k(); ++i)
    if (a.count(g.ids[g.terminals[i]])) mask |= 1ull << i;
  return brute_min_cut(g, mask);
}

// All-pairs shortest paths by |V| rounds of relaxation; weights are exact.
inline std::vector<std::vector<Weight>> brute_all_pairs(const Instance& g) {
  const Weight inf = -1;  // flag, never compared as a length
  std::vector<std::vector<Weight>> d(g.n(), std::vector<Weight>(g.n(), inf));
  for (int v = 0; v < g.n(); ++v) d[v][v] = 0;
  for (const auto& e : g.edges) {
    const Weight w = e.w;
    if (d[e.u][e.v] < 0 || w < d[e.u][e.v]) d[e.u][e.v] = d[e.v][e.u] = w;
  }
  for (int round = 0; round < g.n(); ++round)
    for (const auto& e : g.edges)
      for (int dir = 0; dir < 2; ++dir) {
        const int a = dir ? e.v : e.u, b = dir ? e.u : e.v;
        for (int s = 0; s < g.n(); ++s) {
          if (d[s][a] < 0) continue;
          const Weight cand = d[s][a] + e.w;
          if (d[s][b] < 0 || cand < d[s][b]) d[s][b] = cand;
        }
      }
  return d;
}

// One shortest path from p to q as a vertex sequence, traced by greedy
// descent on exact all-pairs distances. Requires q reachable from p.
inline std::vector<int> trace_shortest_path(const Instance& g,
                                            const std::vector<std::vector<Weight>>& d, int p,
                                            int q) {
  std::vector<int> path{p};
  int at = p;
  while (at != q) {
    int step = -1;
    for (const auto& e : g.edges) {
      const int other = e.u == at ? e.v : e.v == at ? e.u : -1;
      if (other < 0 || d[other][q] < 0) continue;
      if (d[other][q] + e.w == d[at][q]) {
        step = other;
        break;
      }
    }
    if (step < 0) throw std::logic_error("no descent step on a shortest path");
    path.push_back(step);
    at = step;
  }
  return path;
}

// Convenience builders used across the suites.
inline Instance star(const std::vector<std::pair<std::string, Weight>>& arms,
                     const std::string& center = "v") {
  std::vector<std::string> vids{center}, tids;
  std::vector<EdgeSpec> es;
  for (const auto& [t, w] : arms) {
    if (std::find(vids.begin(), vids.end(), t) == vids.end()) vids.push_back(t);
    if (std::find(tids.begin(), tids.end(), t) == tids.end()) tids.push_back(t);
    es.push_back(EdgeSpec{center, t, w, 1});
  }
  return make_instance(vids, tids, es);
}

// Two triangles sharing the terminal t, all five vertices on the outer face.
// t separates the instance, so the one-face pipeline must split here.
inline EmbeddedInstance bowtie() {
  Instance g = make_instance(
      {"t", "a", "b", "c", "d"}, {"t", "a", "c"},
      {{"t", "a", Weight(1)}, {"a", "b", Weight(2)}, {"b", "t", Weight(3)},
       {"t", "c", Weight(4)}, {"c", "d", Weight(5)}, {"d", "t", Weight(6)}});
  std::map<std::string, std::vector<std::string>> rot{{"t", {"a", "b", "c", "d"}},
                                                      {"a", {"t", "b"}},
                                                      {"b", {"a", "t"}},
                                                      {"c", {"t", "d"}},
                                                      {"d", {"c", "t"}}};
  return make_embedded(g, rot, {"t", "a"});
}

}  // namespace termcut::oracle
