#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "termcut/graph.hpp"

namespace termcut {

// Combinatorial plane embedding. Edge e owns darts 2e (u to v) and 2e+1
// (v to u); rot[v] lists the darts with tail v in cyclic drawing order, and
// faces are traced with next(d) = rotation successor of rev(d) at head(d).

inline int dart_edge(int d) { return d >> 1; }
inline int dart_rev(int d) { return d ^ 1; }

struct EmbeddedInstance {
  Instance g;
  std::vector<std::vector<int>> rot;  // per vertex index
  int outer_dart = -1;
  std::vector<int> terminal_cycle;    // terminal vertex indices in outer-walk order
  std::vector<int> dart_pos;          // dart -> index within rot[tail]

  int tail(int d) const {
    const Edge& e = g.edges[dart_edge(d)];
    return d & 1 ? e.v : e.u;
  }
  int head(int d) const {
    const Edge& e = g.edges[dart_edge(d)];
    return d & 1 ? e.u : e.v;
  }
};

namespace detail {

struct FaceTrace {
  std::vector<std::vector<int>> cycles;  // dart lists, one per face
  std::vector<int> face_of;              // per dart
};

// Traces the orbit structure of next(d) over raw dart arrays.
// tails[d] gives the tail vertex of dart d; rot holds darts by tail.
inline FaceTrace trace_faces(const std::vector<int>& tails,
                             const std::vector<std::vector<int>>& rot) {
  const int dart_count = static_cast<int>(tails.size());
  std::vector<int> pos(dart_count, -1);
  for (const auto& list : rot)
    for (size_t i = 0; i < list.size(); ++i) pos[list[i]] = static_cast<int>(i);

  auto next = [&](int d) {
    const int h = tails[dart_rev(d)];
    const auto& list = rot[h];
    return list[(pos[dart_rev(d)] + 1) % list.size()];
  };

  FaceTrace t;
  t.face_of.assign(dart_count, -1);
  for (int d0 = 0; d0 < dart_count; ++d0) {
    if (t.face_of[d0] >= 0) continue;
    const int face = static_cast<int>(t.cycles.size());
    std::vector<int> cycle;
    for (int d = d0; t.face_of[d] < 0; d = next(d)) {
      t.face_of[d] = face;
      cycle.push_back(d);
    }
    t.cycles.push_back(std::move(cycle));
  }
  return t;
}

inline std::vector<int> dart_tails(const Instance& g) {
  std::vector<int> tails(2 * g.m());
  for (int e = 0; e < g.m(); ++e) {
    tails[2 * e] = g.edges[e].u;
    tails[2 * e + 1] = g.edges[e].v;
  }
  return tails;
}

}  // namespace detail

// Validating constructor from dart-level rotations. Requires multiplicity-1
// edges, a connected graph, a genus-0 rotation system, and every terminal on
// the outer face.
inline EmbeddedInstance make_embedded_darts(Instance g, std::vector<std::vector<int>> rot,
                                            int outer_dart) {
  EmbeddedInstance e;
  e.g = std::move(g);
  e.rot = std::move(rot);
  e.outer_dart = outer_dart;

  if (e.g.m() < 1) throw input_error("embedded instance needs at least one edge");
  for (const auto& ed : e.g.edges)
    if (ed.mult != 1) throw input_error("embedded instances require multiplicity 1");
  {
    std::vector<int> comp = components(e.g);
    for (int c : comp)
      if (c != 0) throw input_error("embedded instance must be connected");
  }
  if (static_cast<int>(e.rot.size()) != e.g.n())
    throw input_error("rotation must cover every vertex");

  const int dart_count = 2 * e.g.m();
  std::vector<char> seen(dart_count, 0);
  e.dart_pos.assign(dart_count, -1);
  for (int v = 0; v < e.g.n(); ++v) {
    for (size_t i = 0; i < e.rot[v].size(); ++i) {
      const int d = e.rot[v][i];
      if (d < 0 || d >= dart_count) throw input_error("rotation lists an unknown dart");
      if (seen[d]) throw input_error("rotation repeats a dart");
      seen[d] = 1;
      if (e.tail(d) != v) throw input_error("rotation lists a dart at the wrong vertex");
      e.dart_pos[d] = static_cast<int>(i);
    }
  }
  for (int d = 0; d < dart_count; ++d)
    if (!seen[d]) throw input_error("rotation misses a dart");

  detail::FaceTrace faces = detail::trace_faces(detail::dart_tails(e.g), e.rot);
  const long euler = static_cast<long>(e.g.n()) - e.g.m() + static_cast<long>(faces.cycles.size());
  if (euler != 2) throw input_error("rotation system is not a plane embedding");

  if (e.outer_dart < 0 || e.outer_dart >= dart_count)
    throw input_error("outer face dart out of range");

  // Terminals must lie on the outer face; record their first-visit order.
  std::set<int> on_outer;
  for (int d : faces.cycles[faces.face_of[e.outer_dart]]) {
    const int v = e.tail(d);
    if (e.g.is_terminal[v] && on_outer.insert(v).second) e.terminal_cycle.push_back(v);
  }
  for (int t : e.g.terminals)
    if (!on_outer.count(t))
      throw input_error("terminal " + e.g.ids[t] + " does not lie on the outer face");
  return e;
}

// Constructor from per-vertex neighbor-id lists, the GraphFile form. The
// j-th occurrence of u in rotation[v] refers to the j-th parallel edge
// record between v and u.
inline EmbeddedInstance make_embedded(Instance g,
                                      const std::map<std::string, std::vector<std::string>>& rotation,
                                      const std::pair<std::string, std::string>& outer_face) {
  std::vector<std::vector<int>> rot(g.n());
  std::map<std::pair<int, int>, std::vector<int>> records;  // (v, u) -> edge indices
  for (int j = 0; j < g.m(); ++j) {
    records[{g.edges[j].u, g.edges[j].v}].push_back(j);
    records[{g.edges[j].v, g.edges[j].u}].push_back(j);
  }
  std::map<std::pair<int, int>, size_t> used;
  for (const auto& [id, neighbors] : rotation) {
    const int v = g.index_of(id);
    for (const auto& nid : neighbors) {
      const int u = g.index_of(nid);
      auto it = records.find({v, u});
      size_t& k = used[{v, u}];
      if (it == records.end() || k >= it->second.size())
        throw input_error("rotation at " + id + " lists " + nid + " more often than edges exist");
      const int j = it->second[k++];
      rot[v].push_back(2 * j + (g.edges[j].u == v ? 0 : 1));
    }
  }
  // every dart must be consumed exactly once from its tail side
  for (const auto& [key, list] : records)
    if (used[{key.first, key.second}] != list.size())
      throw input_error("rotation at " + g.ids[key.first] + " misses an incident edge");

  const int u = g.index_of(outer_face.first);
  const int v = g.index_of(outer_face.second);
  int outer = -1;
  for (int j = 0; j < g.m() && outer < 0; ++j) {
    if (g.edges[j].u == u && g.edges[j].v == v) outer = 2 * j;
    if (g.edges[j].v == u && g.edges[j].u == v) outer = 2 * j + 1;
  }
  if (outer < 0)
    throw input_error("outer face edge " + outer_face.first + "-" + outer_face.second + " not found");
  return make_embedded_darts(std::move(g), std::move(rot), outer);
}

namespace detail {

inline std::vector<int> outer_cycle(const EmbeddedInstance& e) {
  FaceTrace faces = trace_faces(dart_tails(e.g), e.rot);
  return faces.cycles[faces.face_of[e.outer_dart]];
}

}  // namespace detail

// Dual of a one-face instance plus the bookkeeping needed to reverse the
// construction: subface terminal s_{i+1} spans the boundary gap from
// terminal_cycle[i] to terminal_cycle[i+1].
struct DualInstance {
  EmbeddedInstance dual;
  std::vector<int> primal_edge_map;            // dual edge index -> primal edge index
  std::vector<std::string> gap_start;          // per dual terminal list position
  std::vector<std::string> gap_end;
  std::vector<std::string> primal_terminal_list;
};

// Splits the outer face at an auxiliary apex vertex joined to every terminal
// and reads the dual off the extended embedding. The subfaces between
// consecutive terminals become the dual terminals s1..sk.
inline DualInstance build_dual(const EmbeddedInstance& e) {
  const Instance& g = e.g;
  const int k = g.k();
  const int m = g.m();
  if (k < 2) throw input_error("dual construction needs at least two terminals");

  const std::vector<int> outer = detail::outer_cycle(e);
  {
    std::map<int, int> tail_visits;
    for (int d : outer) ++tail_visits[e.tail(d)];
    for (int t : g.terminals)
      if (tail_visits[t] != 1)
        throw input_error("terminal " + g.ids[t] +
                          " must appear exactly once on the outer face; split at separator terminals first");
  }

  // Extended graph M: apex vertex x (index n), aux edge m+i to the i-th
  // terminal of the cycle. Aux dart 2(m+i) has tail t_i, its reverse tail x.
  const int n = g.n();
  std::vector<int> tails_m(2 * (m + k));
  for (int j = 0; j < m; ++j) {
    tails_m[2 * j] = g.edges[j].u;
    tails_m[2 * j + 1] = g.edges[j].v;
  }
  for (int i = 0; i < k; ++i) {
    tails_m[2 * (m + i)] = e.terminal_cycle[i];
    tails_m[2 * (m + i) + 1] = n;
  }

  std::vector<int> in_dart(n, -1);  // outer-walk dart arriving at each terminal
  for (int d : outer) in_dart[e.head(d)] = d;

  std::vector<std::vector<int>> rot_m(n + 1);
  for (int v = 0; v < n; ++v) rot_m[v] = e.rot[v];
  for (int i = 0; i < k; ++i) {
    const int t = e.terminal_cycle[i];
    auto& list = rot_m[t];
    const int at = e.dart_pos[dart_rev(in_dart[t])];
    list.insert(list.begin() + at + 1, 2 * (m + i));
  }
  // The apex sees the boundary from the far side, so its spokes run in
  // reverse terminal order.
  for (int i = k - 1; i >= 0; --i) rot_m[n].push_back(2 * (m + i) + 1);

  detail::FaceTrace faces = detail::trace_faces(tails_m, rot_m);

  // Face names: the subface holding the apex-to-t_i dart is s_{i+1}; other
  // faces get fresh internal names in discovery order.
  const int face_count = static_cast<int>(faces.cycles.size());
  std::vector<std::string> face_name(face_count);
  std::vector<int> subface(k);
  for (int i = 0; i < k; ++i) {
    subface[i] = faces.face_of[2 * (m + i) + 1];
    face_name[subface[i]] = "s" + std::to_string(i + 1);
  }
  {
    std::set<int> sub(subface.begin(), subface.end());
    if (static_cast<int>(sub.size()) != k)
      throw input_error("inconsistent dual: outer subfaces are not distinct");
    int counter = 0;
    for (int f = 0; f < face_count; ++f)
      if (face_name[f].empty()) face_name[f] = "f" + std::to_string(++counter);
  }

  std::vector<std::string> vids = face_name;
  std::sort(vids.begin(), vids.end());
  std::vector<std::string> tids;
  for (int i = 0; i < k; ++i) tids.push_back(face_name[subface[i]]);

  std::vector<EdgeSpec> specs;
  for (int j = 0; j < m; ++j) {
    const int f1 = faces.face_of[2 * j], f2 = faces.face_of[2 * j + 1];
    if (f1 == f2)
      throw input_error("bridge edge " + g.ids[g.edges[j].u] + "-" + g.ids[g.edges[j].v] +
                        " has no dual");
    specs.push_back(EdgeSpec{face_name[f1], face_name[f2], g.edges[j].w, 1});
  }
  Instance dual_g = make_instance(vids, tids, specs);

  // Dual dart j matches primal dart j: its tail is the face containing j.
  std::vector<std::vector<int>> rot_d(dual_g.n());
  for (int f = 0; f < face_count; ++f) {
    const int dv = dual_g.index_of(face_name[f]);
    for (int d : faces.cycles[f])
      if (dart_edge(d) < m) rot_d[dv].push_back(d);
  }

  // The merged face of the dual carries every dual terminal exactly once;
  // anchor the dual outer face at s1 on it.
  std::vector<int> tails_d(2 * m);
  for (int j = 0; j < m; ++j) {
    tails_d[2 * j] = dual_g.edges[j].u;
    tails_d[2 * j + 1] = dual_g.edges[j].v;
  }
  detail::FaceTrace dual_faces = detail::trace_faces(tails_d, rot_d);
  // A dual face gathers the dual darts of the primal darts sharing one tail
  // vertex, so the merged face (apex and terminals fused) is the one holding
  // the outer-walk dart that leaves the first cycle terminal. It must touch
  // every gap subface exactly once; anchor the dual outer face at s1 on it.
  const auto& merged = dual_faces.cycles[dual_faces.face_of[dart_rev(in_dart[e.terminal_cycle[0]])]];
  std::map<int, int> visits;
  for (int d : merged) ++visits[tails_d[d]];
  for (int t : dual_g.terminals)
    if (visits[t] != 1) throw input_error("inconsistent dual: merged face misses a dual terminal");
  int dual_outer = -1;
  for (int d : merged)
    if (tails_d[d] == dual_g.terminals[0]) dual_outer = d;

  DualInstance out;
  out.dual = make_embedded_darts(std::move(dual_g), std::move(rot_d), dual_outer);
  out.primal_edge_map.resize(m);
  for (int j = 0; j < m; ++j) out.primal_edge_map[j] = j;
  for (int i = 0; i < k; ++i) {
    out.gap_start.push_back(g.ids[e.terminal_cycle[i]]);
    out.gap_end.push_back(g.ids[e.terminal_cycle[(i + 1) % k]]);
  }
  out.primal_terminal_list = g.terminal_ids();
  return out;
}

// Rebuilds a one-face primal from a dual: walk the dual outer face, lace a
// chord cycle through the dual terminals, and read faces as primal vertices.
// The all-chord face is the apex remnant and disappears; the face beside
// chord j is the primal terminal ending gap j.
inline EmbeddedInstance reverse_dual(const DualInstance& din) {
  const EmbeddedInstance& d = din.dual;
  const Instance& dg = d.g;
  const int k = dg.k();
  const int m = dg.m();
  if (k < 2) throw input_error("dual must keep at least two terminals");
  if (static_cast<int>(din.gap_start.size()) != k || static_cast<int>(din.gap_end.size()) != k)
    throw input_error("dual instance misses gap alignment");

  const std::vector<int> outer = detail::outer_cycle(d);
  std::vector<int> walk_order;  // dual terminal list positions in walk order
  {
    std::vector<int> pos_of(dg.n(), -1);
    for (int p = 0; p < k; ++p) pos_of[dg.terminals[p]] = p;
    std::map<int, int> visits;
    for (int dd : outer) ++visits[d.tail(dd)];
    for (int t : dg.terminals)
      if (visits[t] != 1)
        throw input_error("dual terminal " + dg.ids[t] + " must appear exactly once on the dual outer face");
    for (int dd : outer)
      if (pos_of[d.tail(dd)] >= 0) walk_order.push_back(pos_of[d.tail(dd)]);
  }

  // Chord j joins consecutive walk terminals sigma_j, sigma_{j+1} and stands
  // in for the primal terminal their gaps share. The dual outer walk runs
  // against the primal terminal order, so the walk arc leaving sigma_j exits
  // through the primal terminal that opens sigma_j's gap.
  std::vector<std::string> chord_terminal(k);
  for (int j = 0; j < k; ++j) {
    const int a = walk_order[j], b = walk_order[(j + 1) % k];
    if (din.gap_start[a] != din.gap_end[b])
      throw input_error("misaligned dual terminals: gap of " + dg.ids[dg.terminals[a]] +
                        " does not meet gap of " + dg.ids[dg.terminals[b]]);
    chord_terminal[j] = din.gap_start[a];
  }

  std::vector<int> tails_m(2 * (m + k));
  for (int j = 0; j < m; ++j) {
    tails_m[2 * j] = dg.edges[j].u;
    tails_m[2 * j + 1] = dg.edges[j].v;
  }
  for (int j = 0; j < k; ++j) {
    tails_m[2 * (m + j)] = dg.terminals[walk_order[j]];
    tails_m[2 * (m + j) + 1] = dg.terminals[walk_order[(j + 1) % k]];
  }

  std::vector<int> in_dart(dg.n(), -1);
  for (int dd : outer) in_dart[d.head(dd)] = dd;

  std::vector<std::vector<int>> rot_m(dg.n());
  for (int v = 0; v < dg.n(); ++v) rot_m[v] = d.rot[v];
  for (int j = 0; j < k; ++j) {
    const int s = dg.terminals[walk_order[j]];
    auto& list = rot_m[s];
    const int at = d.dart_pos[dart_rev(in_dart[s])];
    // At the walk corner of s insert [chord backward, chord onward], so the
    // face of the boundary arc leaving s closes over the backward chord of
    // the next corner and each chord keeps a terminal face of its own.
    const int onward = 2 * (m + j);
    const int backward = 2 * (m + ((j + k - 1) % k)) + 1;
    list.insert(list.begin() + at + 1, {backward, onward});
  }

  detail::FaceTrace faces = detail::trace_faces(tails_m, rot_m);
  const int face_count = static_cast<int>(faces.cycles.size());

  int apex_face = -1;
  for (int f = 0; f < face_count; ++f) {
    bool all_chords = true;
    for (int dd : faces.cycles[f]) all_chords = all_chords && dart_edge(dd) >= m;
    if (!all_chords) continue;
    if (apex_face >= 0) throw input_error("inconsistent dual: two all-chord faces");
    apex_face = f;
  }
  if (apex_face < 0 || static_cast<int>(faces.cycles[apex_face].size()) != k)
    throw input_error("inconsistent dual: chord cycle does not bound a face");

  std::vector<std::string> face_name(face_count);
  std::vector<int> chord_face(k, -1);
  for (int j = 0; j < k; ++j) {
    const int d0 = 2 * (m + j), d1 = d0 + 1;
    const int f = faces.face_of[d0] == apex_face ? faces.face_of[d1] : faces.face_of[d0];
    if (f == apex_face || (!face_name[f].empty()))
      throw input_error("inconsistent dual: terminal faces collide");
    face_name[f] = chord_terminal[j];
    chord_face[j] = f;
  }
  {
    std::set<std::string> taken(chord_terminal.begin(), chord_terminal.end());
    int counter = 0;
    for (int f = 0; f < face_count; ++f) {
      if (f == apex_face || !face_name[f].empty()) continue;
      std::string name;
      do {
        name = "n" + std::to_string(++counter);
      } while (taken.count(name));
      face_name[f] = name;
    }
  }

  std::vector<std::string> vids;
  for (int f = 0; f < face_count; ++f)
    if (f != apex_face) vids.push_back(face_name[f]);
  std::sort(vids.begin(), vids.end());
  for (const auto& t : din.primal_terminal_list)
    if (!std::binary_search(vids.begin(), vids.end(), t))
      throw input_error("inconsistent dual: primal terminal " + t + " has no face");

  std::vector<EdgeSpec> specs;
  for (int j = 0; j < m; ++j) {
    const int f1 = faces.face_of[2 * j], f2 = faces.face_of[2 * j + 1];
    specs.push_back(EdgeSpec{face_name[f1], face_name[f2], dg.edges[j].w, 1});
  }
  Instance pg = make_instance(vids, din.primal_terminal_list, specs);

  std::vector<std::vector<int>> rot_p(pg.n());
  for (int f = 0; f < face_count; ++f) {
    if (f == apex_face) continue;
    const int pv = pg.index_of(face_name[f]);
    for (int dd : faces.cycles[f])
      if (dart_edge(dd) < m) rot_p[pv].push_back(dd);
  }

  // The outer face resumes right after the removed chord at the terminal
  // that anchored the original outer walk.
  int outer_dart = -1;
  {
    const std::string anchor = din.gap_start[walk_order[0]];
    for (int j = 0; j < k && outer_dart < 0; ++j) {
      if (chord_terminal[j] != anchor) continue;
      const auto& cycle = faces.cycles[chord_face[j]];
      for (size_t i = 0; i < cycle.size(); ++i) {
        if (dart_edge(cycle[i]) < m) continue;
        outer_dart = cycle[(i + 1) % cycle.size()];
        if (dart_edge(outer_dart) >= m)
          throw input_error("inconsistent dual: terminal face is all chords");
        break;
      }
    }
  }
  if (outer_dart < 0) throw input_error("inconsistent dual: anchor terminal face not found");

  return make_embedded_darts(std::move(pg), std::move(rot_p), outer_dart);
}

// Repeatedly splits at terminals whose removal disconnects the instance.
// Every piece keeps the separator terminal; piece edge sets partition the
// original edges.
inline std::vector<EmbeddedInstance> split_at_separator_terminals(const EmbeddedInstance& root) {
  std::vector<EmbeddedInstance> done;
  std::vector<EmbeddedInstance> work{root};
  while (!work.empty()) {
    EmbeddedInstance e = std::move(work.front());
    work.erase(work.begin());
    const Instance& g = e.g;

    int separator = -1;
    std::vector<int> comp_without;
    for (int t : g.terminals) {
      // components of g minus t
      std::vector<std::vector<int>> adj(g.n());
      for (const auto& ed : g.edges) {
        if (ed.u == t || ed.v == t) continue;
        adj[ed.u].push_back(ed.v);
        adj[ed.v].push_back(ed.u);
      }
      comp_without.assign(g.n(), -1);
      int label = 0;
      for (int s = 0; s < g.n(); ++s) {
        if (s == t || comp_without[s] >= 0) continue;
        std::vector<int> stack{s};
        comp_without[s] = label;
        while (!stack.empty()) {
          int v = stack.back();
          stack.pop_back();
          for (int w : adj[v])
            if (comp_without[w] < 0) {
              comp_without[w] = label;
              stack.push_back(w);
            }
        }
        ++label;
      }
      if (label > 1) {
        separator = t;
        break;
      }
    }
    if (separator < 0) {
      done.push_back(std::move(e));
      continue;
    }

    const std::vector<int> outer = detail::outer_cycle(e);
    int label_count = 0;
    for (int c : comp_without) label_count = std::max(label_count, c + 1);
    for (int c = 0; c < label_count; ++c) {
      std::vector<char> keep_vertex(g.n(), 0);
      keep_vertex[separator] = 1;
      for (int v = 0; v < g.n(); ++v)
        if (comp_without[v] == c) keep_vertex[v] = 1;

      std::vector<int> edge_map(g.m(), -1);
      std::vector<std::string> vids;
      std::vector<EdgeSpec> specs;
      for (int v = 0; v < g.n(); ++v)
        if (keep_vertex[v]) vids.push_back(g.ids[v]);
      int next_edge = 0;
      for (int j = 0; j < g.m(); ++j) {
        const Edge& ed = g.edges[j];
        if (!keep_vertex[ed.u] || !keep_vertex[ed.v]) continue;
        // edges at the separator must lead into this component
        if (ed.u == separator && comp_without[ed.v] != c) continue;
        if (ed.v == separator && comp_without[ed.u] != c) continue;
        edge_map[j] = next_edge++;
        specs.push_back(EdgeSpec{g.ids[ed.u], g.ids[ed.v], ed.w, 1});
      }
      std::vector<std::string> tids;
      for (int t : g.terminals)
        if (keep_vertex[t] && (t == separator || comp_without[t] == c)) tids.push_back(g.ids[t]);

      Instance pg = make_instance(vids, tids, specs);
      std::vector<std::vector<int>> rot_p(pg.n());
      for (int v = 0; v < g.n(); ++v) {
        if (!keep_vertex[v]) continue;
        const int pv = pg.index_of(g.ids[v]);
        for (int dd : e.rot[v]) {
          const int j = dart_edge(dd);
          if (edge_map[j] < 0) continue;
          rot_p[pv].push_back(2 * edge_map[j] + (dd & 1));
        }
      }
      int outer_dart = -1;
      for (int dd : outer)
        if (edge_map[dart_edge(dd)] >= 0) {
          outer_dart = 2 * edge_map[dart_edge(dd)] + (dd & 1);
          break;
        }
      if (outer_dart < 0) outer_dart = rot_p[pg.index_of(g.ids[separator])].at(0);
      work.push_back(make_embedded_darts(std::move(pg), std::move(rot_p), outer_dart));
    }
  }
  return done;
}

// Anchored plane isomorphism: same rotation structure, weights, and terminal
// names, allowing the outer-walk anchor of b to rotate. Non-terminal names
// are free.
inline bool plane_isomorphic(const EmbeddedInstance& a, const EmbeddedInstance& b) {
  if (a.g.n() != b.g.n() || a.g.m() != b.g.m() || a.g.k() != b.g.k()) return false;
  if (a.g.terminal_ids() != b.g.terminal_ids()) return false;

  const int dart_count = 2 * a.g.m();
  auto succ = [](const EmbeddedInstance& e, int d) {
    const auto& list = e.rot[e.tail(d)];
    return list[(e.dart_pos[d] + 1) % list.size()];
  };

  auto try_anchor = [&](int anchor_b) {
    std::vector<int> phi(dart_count, -1);
    std::vector<int> vmap(a.g.n(), -1), vmap_rev(b.g.n(), -1);
    std::vector<int> stack{a.outer_dart};
    phi[a.outer_dart] = anchor_b;
    auto bind = [&](int da, int db) {
      if (db < 0) return false;
      if (phi[da] >= 0) return phi[da] == db;
      phi[da] = db;
      stack.push_back(da);
      return true;
    };
    while (!stack.empty()) {
      const int da = stack.back();
      stack.pop_back();
      const int db = phi[da];
      if (a.g.edges[dart_edge(da)].w != b.g.edges[dart_edge(db)].w) return false;
      const int va = a.tail(da), vb = b.tail(db);
      if (vmap[va] >= 0 && vmap[va] != vb) return false;
      if (vmap_rev[vb] >= 0 && vmap_rev[vb] != va) return false;
      vmap[va] = vb;
      vmap_rev[vb] = va;
      if (a.g.is_terminal[va] != b.g.is_terminal[vb]) return false;
      if (a.g.is_terminal[va] && a.g.ids[va] != b.g.ids[vb]) return false;
      if (a.rot[va].size() != b.rot[vb].size()) return false;
      if (!bind(dart_rev(da), dart_rev(db))) return false;
      if (!bind(succ(a, da), succ(b, db))) return false;
    }
    for (int d = 0; d < dart_count; ++d)
      if (phi[d] < 0) return false;
    return true;
  };

  for (int anchor : detail::outer_cycle(b))
    if (try_anchor(anchor)) return true;
  return false;
}

}  // namespace termcut
