#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "termcut/graph.hpp"
#include "termcut/mincut.hpp"
#include "termcut/planar.hpp"

namespace termcut {

namespace detail {

struct ShortestPaths {
  std::vector<Weight> dist;
  std::vector<char> reached;
  std::vector<int> parent_edge;  // edge used to reach the vertex, -1 at source
};

// Exact Dijkstra, deterministic: settles the unreached vertex with the
// smallest (distance, index) and keeps the first parent that attains it.
inline ShortestPaths dijkstra(const Instance& g, int source) {
  ShortestPaths sp;
  sp.dist.assign(g.n(), Weight(0));
  sp.reached.assign(g.n(), 0);
  sp.parent_edge.assign(g.n(), -1);
  std::vector<char> settled(g.n(), 0);
  sp.reached[source] = 1;

  std::vector<std::vector<int>> adj(g.n());
  for (int j = 0; j < g.m(); ++j) {
    adj[g.edges[j].u].push_back(j);
    adj[g.edges[j].v].push_back(j);
  }

  for (int round = 0; round < g.n(); ++round) {
    int best = -1;
    for (int v = 0; v < g.n(); ++v) {
      if (settled[v] || !sp.reached[v]) continue;
      if (best < 0 || sp.dist[v] < sp.dist[best]) best = v;
    }
    if (best < 0) break;
    settled[best] = 1;
    for (int j : adj[best]) {
      const Edge& e = g.edges[j];
      const int other = e.u == best ? e.v : e.u;
      if (settled[other]) continue;
      Weight cand = sp.dist[best] + e.w;
      if (!sp.reached[other] || cand < sp.dist[other]) {
        sp.reached[other] = 1;
        sp.dist[other] = cand;
        sp.parent_edge[other] = j;
      }
    }
  }
  return sp;
}

}  // namespace detail

struct DualPath {
  std::string from, to;         // dual terminal ids, oriented off the peel
  std::vector<int> dual_edges;  // ordered from 'from' to 'to'
  Weight length;
};

struct PathDecomposition {
  DualInstance dual;
  Bipartition bipartition;
  Weight cut_value;
  std::vector<DualPath> paths;
};

// Decomposes the canonical minimum cut of a one-face instance into
// edge-disjoint shortest paths of the dual. Components cut off by the
// removed edges must cover cyclic intervals of the remaining terminals and
// peel away one at a time; anything else is a hard failure.
inline PathDecomposition decompose_mincut_dual(const EmbeddedInstance& e,
                                               const std::vector<std::string>& side_a) {
  PathDecomposition out;
  out.dual = build_dual(e);
  const Instance& g = e.g;
  const Instance& dg = out.dual.dual.g;
  const int k = g.k();

  CutResult cut = min_terminal_cut(g, side_a);
  out.bipartition = cut.bipartition;
  out.cut_value = cut.value;

  std::vector<int> dual_of_primal(g.m(), -1);
  for (size_t idx = 0; idx < out.dual.primal_edge_map.size(); ++idx)
    dual_of_primal[out.dual.primal_edge_map[idx]] = static_cast<int>(idx);

  std::vector<int> cyc_pos(g.n(), -1);
  for (int i = 0; i < k; ++i) cyc_pos[e.terminal_cycle[i]] = i;

  std::set<int> cut_set(cut.cut_edges.begin(), cut.cut_edges.end());
  std::vector<char> remaining(k, 1);
  int rem_count = k;

  while (!cut_set.empty()) {
    std::vector<std::vector<int>> adj(g.n());
    for (int j = 0; j < g.m(); ++j) {
      if (cut_set.count(j)) continue;
      adj[g.edges[j].u].push_back(g.edges[j].v);
      adj[g.edges[j].v].push_back(g.edges[j].u);
    }
    std::vector<int> comp(g.n(), -1);
    int labels = 0;
    for (int s = 0; s < g.n(); ++s) {
      if (comp[s] >= 0) continue;
      std::vector<int> stack{s};
      comp[s] = labels;
      while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int w : adj[v])
          if (comp[w] < 0) {
            comp[w] = labels;
            stack.push_back(w);
          }
      }
      ++labels;
    }

    std::vector<int> rem_positions;  // ascending
    for (int p = 0; p < k; ++p)
      if (remaining[p]) rem_positions.push_back(p);
    const int r = static_cast<int>(rem_positions.size());
    std::vector<int> rank(k, -1);
    for (int i = 0; i < r; ++i) rank[rem_positions[i]] = i;

    // candidate components: remaining-terminal set a proper nonempty cyclic
    // interval, keyed by the interval's start position
    std::vector<std::pair<int, int>> candidates;  // (start position, component)
    for (int c = 0; c < labels; ++c) {
      std::vector<char> in_c(r, 0);
      int count = 0;
      for (int i = 0; i < r; ++i) {
        const int v = e.terminal_cycle[rem_positions[i]];
        if (comp[v] == c) {
          in_c[i] = 1;
          ++count;
        }
      }
      if (count == 0 || count == r) continue;
      int starts = 0, start_rank = -1;
      for (int i = 0; i < r; ++i)
        if (in_c[i] && !in_c[(i + r - 1) % r]) {
          ++starts;
          start_rank = i;
        }
      if (starts != 1) continue;
      candidates.push_back({rem_positions[start_rank], c});
    }
    std::sort(candidates.begin(), candidates.end());

    bool peeled = false;
    for (const auto& [start_pos, c] : candidates) {
      const int start_rank = rank[start_pos];
      int len = 1;
      while (len < r) {
        const int i = (start_rank + len) % r;
        const int v = e.terminal_cycle[rem_positions[i]];
        if (comp[v] != c) break;
        ++len;
      }
      const int end_pos = rem_positions[(start_rank + len - 1) % r];
      const int prev_pos = rem_positions[(start_rank + r - 1) % r];
      const int next_pos = rem_positions[(start_rank + len) % r];

      // gap g sits between cycle positions g and g+1
      auto gap_range = [&](int from, int to) {
        std::set<int> gaps;
        for (int p = from; p != to; p = (p + 1) % k) gaps.insert(p);
        return gaps;
      };
      const std::set<int> before = gap_range(prev_pos, start_pos);
      const std::set<int> after = gap_range(end_pos, next_pos);

      std::vector<int> peel;  // primal edge indices of delta(C)
      for (int j : cut_set) {
        const bool u_in = comp[g.edges[j].u] == c;
        const bool v_in = comp[g.edges[j].v] == c;
        if (u_in != v_in) peel.push_back(j);
      }

      // the peel must form a simple dual path between two dual terminals
      std::map<int, std::vector<int>> inc;  // dual vertex -> peel edges
      bool simple = true;
      for (int j : peel) {
        const int idx = dual_of_primal[j];
        inc[dg.edges[idx].u].push_back(j);
        inc[dg.edges[idx].v].push_back(j);
      }
      std::vector<int> ends;
      for (const auto& [v, list] : inc) {
        if (list.size() > 2) simple = false;
        if (list.size() == 1) ends.push_back(v);
      }
      if (!simple || ends.size() != 2) continue;

      auto gap_of = [&](int dv) {
        for (int p = 0; p < k; ++p)
          if (dg.terminals[p] == dv) return p;
        return -1;
      };
      const int gap0 = gap_of(ends[0]), gap1 = gap_of(ends[1]);
      if (gap0 < 0 || gap1 < 0) continue;

      int from = -1, to = -1;
      if (before.count(gap0) && after.count(gap1)) {
        from = ends[0];
        to = ends[1];
      } else if (before.count(gap1) && after.count(gap0)) {
        from = ends[1];
        to = ends[0];
      } else {
        continue;
      }

      // order the peel from 'from' and confirm it is connected
      std::vector<int> ordered;
      Weight length = 0;
      {
        std::set<int> left(peel.begin(), peel.end());
        int at = from;
        while (!left.empty()) {
          int step = -1;
          for (int j : inc[at])
            if (left.count(j)) {
              step = j;
              break;
            }
          if (step < 0) break;
          left.erase(step);
          ordered.push_back(step);
          const int idx = dual_of_primal[step];
          length += dg.edges[idx].w;
          at = dg.edges[idx].u == (at) ? dg.edges[idx].v : dg.edges[idx].u;
        }
        if (!left.empty() || at != to) continue;
      }

      detail::ShortestPaths sp = detail::dijkstra(dg, from);
      if (!sp.reached[to] || sp.dist[to] != length) continue;

      DualPath path;
      path.from = dg.ids[from];
      path.to = dg.ids[to];
      path.length = length;
      for (int j : ordered) path.dual_edges.push_back(dual_of_primal[j]);
      out.paths.push_back(std::move(path));

      for (int j : peel) cut_set.erase(j);
      for (int i = 0; i < r; ++i) {
        const int v = e.terminal_cycle[rem_positions[i]];
        if (comp[v] == c) {
          remaining[rem_positions[i]] = 0;
          --rem_count;
        }
      }
      peeled = true;
      break;
    }
    if (!peeled) throw std::runtime_error("minimum cut does not decompose into interval peels");
  }
  return out;
}

// Greedy portal selection along a boundary walk. dists[i] is the source
// distance of the i-th walk vertex, prefix[i] the walk length up to it, and
// anchor an index attaining the minimum distance. Walking from the last
// portal u reaches j within (1+eps)-slack while dists[u] + walk(u, j) stays
// at most (1+eps) * dists[j]; each violation opens a new portal.
inline std::vector<size_t> epsilon_cover(const std::vector<Weight>& dists,
                                         const std::vector<Weight>& prefix, size_t anchor,
                                         const Weight& eps) {
  const size_t n = dists.size();
  if (n == 0) throw input_error("epsilon cover needs at least one position");
  if (prefix.size() != n) throw input_error("distance and prefix arrays disagree in length");
  if (!(eps > 0)) throw input_error("epsilon must be positive");
  if (anchor >= n) throw input_error("anchor out of range");
  for (size_t i = 0; i < n; ++i) {
    if (dists[i] < 0) throw input_error("distances must be nonnegative");
    if (dists[anchor] > dists[i]) throw input_error("anchor must attain the minimum distance");
    if (i + 1 < n) {
      if (!(prefix[i] < prefix[i + 1])) throw input_error("prefix must increase strictly");
      Weight gap = prefix[i + 1] - prefix[i];
      Weight diff = dists[i + 1] - dists[i];
      if (diff > gap || -diff > gap)
        throw input_error("distances violate the triangle inequality along the walk");
    }
  }

  const Weight one_plus = Weight(1) + eps;
  std::vector<size_t> portals{anchor};
  size_t u = anchor;
  for (size_t j = anchor + 1; j < n; ++j) {
    if (dists[u] + (prefix[j] - prefix[u]) > one_plus * dists[j]) {
      portals.push_back(j);
      u = j;
    }
  }
  u = anchor;
  for (size_t j = anchor; j-- > 0;) {
    if (dists[u] + (prefix[u] - prefix[j]) > one_plus * dists[j]) {
      portals.push_back(j);
      u = j;
    }
  }
  std::sort(portals.begin(), portals.end());
  return portals;
}

// A dual emulator maps the dual of a piece to a smaller dual with the same
// terminals in the same outer alignment.
using Emulator = std::function<EmbeddedInstance(const EmbeddedInstance&, const Weight&)>;

inline EmbeddedInstance identity_emulator(const EmbeddedInstance& dual, const Weight&) {
  return dual;
}

// Keeps the dual boundary walk plus shortest paths from every dual terminal
// to an epsilon cover of the walk measured from that terminal.
inline EmbeddedInstance portal_greedy_emulator(const EmbeddedInstance& dual, const Weight& eps) {
  if (!(eps > 0)) throw input_error("epsilon must be positive");
  const Instance& dg = dual.g;
  const std::vector<int> outer = detail::outer_cycle(dual);
  const size_t walk_len = outer.size();

  std::vector<char> keep(dg.m(), 0);
  for (int d : outer) keep[dart_edge(d)] = 1;

  for (int s : dg.terminals) {
    size_t at = walk_len;
    for (size_t i = 0; i < walk_len; ++i)
      if (dual.tail(outer[i]) == s) {
        at = i;
        break;
      }
    if (at == walk_len) throw input_error("dual terminal is not on the dual outer face");

    detail::ShortestPaths sp = detail::dijkstra(dg, s);
    std::vector<Weight> dists(walk_len), prefix(walk_len);
    Weight acc = 0;
    for (size_t j = 0; j < walk_len; ++j) {
      const int d = outer[(at + j) % walk_len];
      const int v = dual.tail(d);
      if (!sp.reached[v]) throw input_error("dual is not connected");
      dists[j] = sp.dist[v];
      prefix[j] = acc;
      acc += dg.edges[dart_edge(d)].w;
    }

    for (size_t j : epsilon_cover(dists, prefix, 0, eps)) {
      int v = dual.tail(outer[(at + j) % walk_len]);
      while (v != s) {
        const int pe = sp.parent_edge[v];
        keep[pe] = 1;
        v = dg.edges[pe].u == v ? dg.edges[pe].v : dg.edges[pe].u;
      }
    }
  }

  std::vector<int> edge_map(dg.m(), -1);
  std::vector<char> keep_vertex(dg.n(), 0);
  std::vector<EdgeSpec> specs;
  int next_edge = 0;
  for (int j = 0; j < dg.m(); ++j) {
    if (!keep[j]) continue;
    edge_map[j] = next_edge++;
    keep_vertex[dg.edges[j].u] = 1;
    keep_vertex[dg.edges[j].v] = 1;
    specs.push_back(EdgeSpec{dg.ids[dg.edges[j].u], dg.ids[dg.edges[j].v], dg.edges[j].w, 1});
  }
  std::vector<std::string> vids;
  for (int v = 0; v < dg.n(); ++v)
    if (keep_vertex[v]) vids.push_back(dg.ids[v]);

  Instance sub = make_instance(vids, dg.terminal_ids(), specs);
  std::vector<std::vector<int>> rot(sub.n());
  for (int v = 0; v < dg.n(); ++v) {
    if (!keep_vertex[v]) continue;
    const int sv = sub.index_of(dg.ids[v]);
    for (int d : dual.rot[v])
      if (edge_map[dart_edge(d)] >= 0) rot[sv].push_back(2 * edge_map[dart_edge(d)] + (d & 1));
  }
  const int outer_dart = 2 * edge_map[dart_edge(dual.outer_dart)] + (dual.outer_dart & 1);
  return make_embedded_darts(std::move(sub), std::move(rot), outer_dart);
}

// Unions piece sparsifiers, identifying vertices by id. Shared ids must be
// terminals of every piece containing them; non-terminals get piece-scoped
// names.
inline Instance glue_sparsifiers(const std::vector<std::pair<EmbeddedInstance, Instance>>& pieces) {
  if (pieces.empty()) throw input_error("nothing to glue");
  std::map<std::string, int> owner;
  std::set<std::string> all_terminals;
  for (size_t p = 0; p < pieces.size(); ++p) {
    const Instance& pg = pieces[p].first.g;
    const Instance& h = pieces[p].second;
    if (h.terminal_ids() != pg.terminal_ids())
      throw input_error("sparsifier terminals do not match its piece");
    for (const auto& t : pg.terminal_ids()) all_terminals.insert(t);
    for (int v = 0; v < pg.n(); ++v) {
      const std::string& id = pg.ids[v];
      auto it = owner.find(id);
      if (it == owner.end()) {
        owner[id] = static_cast<int>(p);
      } else if (!pg.is_terminal[v]) {
        throw input_error("pieces share non-terminal vertex " + id);
      }
    }
  }

  std::vector<std::string> vids(all_terminals.begin(), all_terminals.end());
  std::vector<EdgeSpec> specs;
  for (size_t p = 0; p < pieces.size(); ++p) {
    const Instance& h = pieces[p].second;
    std::map<std::string, std::string> rename;
    for (int v = 0; v < h.n(); ++v) {
      if (h.is_terminal[v]) {
        rename[h.ids[v]] = h.ids[v];
        continue;
      }
      std::string name = "g" + std::to_string(p + 1) + "_" + h.ids[v];
      while (all_terminals.count(name)) name += "_";
      rename[h.ids[v]] = name;
      vids.push_back(name);
    }
    for (const auto& ed : h.edges)
      specs.push_back(EdgeSpec{rename[h.ids[ed.u]], rename[h.ids[ed.v]], ed.w, ed.mult});
  }
  std::vector<std::string> tids(all_terminals.begin(), all_terminals.end());
  return make_instance(vids, tids, specs);
}

// Rebuilds an instance with the given terminal list (same set, new order).
inline Instance with_terminals(const Instance& g, const std::vector<std::string>& tids) {
  const std::vector<std::string> current = g.terminal_ids();
  std::set<std::string> want(tids.begin(), tids.end());
  std::set<std::string> have(current.begin(), current.end());
  if (want != have || want.size() != tids.size())
    throw input_error("terminal reorder must keep the same terminal set");
  std::vector<EdgeSpec> specs;
  for (const auto& ed : g.edges) specs.push_back(EdgeSpec{g.ids[ed.u], g.ids[ed.v], ed.w, ed.mult});
  return make_instance(g.ids, tids, specs);
}

// Full one-face pipeline: split at separator terminals, run the emulator on
// each piece's dual, reverse back, and glue.
inline Instance one_face_sparsify(const EmbeddedInstance& e, const Emulator& emulator,
                                  const Weight& eps) {
  const std::vector<EmbeddedInstance> pieces = split_at_separator_terminals(e);
  std::vector<std::pair<EmbeddedInstance, Instance>> sparsified;
  for (const EmbeddedInstance& piece : pieces) {
    if (piece.g.k() <= 1) {
      sparsified.push_back({piece, piece.g});
      continue;
    }
    DualInstance din = build_dual(piece);
    EmbeddedInstance reduced = emulator(din.dual, eps);
    if (reduced.g.terminal_ids() != din.dual.g.terminal_ids())
      throw input_error("emulator changed the dual terminal list");
    {
      // cyclic outer order must survive, same direction
      std::vector<std::string> a, b;
      for (int v : din.dual.terminal_cycle) a.push_back(din.dual.g.ids[v]);
      for (int v : reduced.terminal_cycle) b.push_back(reduced.g.ids[v]);
      std::vector<std::string> ab = a;
      ab.insert(ab.end(), a.begin(), a.end());
      bool aligned = false;
      for (size_t off = 0; !aligned && a.size() == b.size() && off < a.size(); ++off)
        aligned = std::equal(b.begin(), b.end(), ab.begin() + off);
      if (!aligned) throw input_error("emulator changed the dual terminal alignment");
    }
    DualInstance reduced_din;
    reduced_din.dual = std::move(reduced);
    reduced_din.primal_edge_map.resize(reduced_din.dual.g.m());
    for (int j = 0; j < reduced_din.dual.g.m(); ++j) reduced_din.primal_edge_map[j] = j;
    reduced_din.gap_start = din.gap_start;
    reduced_din.gap_end = din.gap_end;
    reduced_din.primal_terminal_list = din.primal_terminal_list;
    sparsified.push_back({piece, reverse_dual(reduced_din).g});
  }
  Instance glued =
      sparsified.size() == 1 ? sparsified[0].second : glue_sparsifiers(sparsified);
  return with_terminals(glued, e.g.terminal_ids());
}

}  // namespace termcut
