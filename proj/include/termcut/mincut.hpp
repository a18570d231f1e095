#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <string>
#include <vector>

#include "termcut/graph.hpp"
#include "termcut/rational.hpp"

namespace termcut {

// A two-sided terminal split. Canonical form: side_a is the side containing
// the lexicographically smallest terminal id; both sides are sorted id lists.
struct Bipartition {
  std::vector<std::string> side_a;
  std::vector<std::string> side_b;

  bool operator==(const Bipartition& o) const {
    return side_a == o.side_a && side_b == o.side_b;
  }
};

// Terminal-subset masks are bitmasks over positions in the terminal list.
// Canonical masks contain the anchor bit, the position of the smallest id.
inline int anchor_position(const Instance& g) {
  if (g.k() == 0) throw input_error("instance has no terminals");
  int best = 0;
  for (int p = 1; p < g.k(); ++p)
    if (g.terminal_id(p) < g.terminal_id(best)) best = p;
  return best;
}

inline uint64_t canonicalize_mask(const Instance& g, uint64_t mask) {
  const uint64_t full = (g.k() >= 64) ? ~0ull : ((1ull << g.k()) - 1);
  mask &= full;
  if (!(mask >> anchor_position(g) & 1)) mask = full & ~mask;
  return mask;
}

inline Bipartition mask_to_bipartition(const Instance& g, uint64_t mask) {
  mask = canonicalize_mask(g, mask);
  Bipartition bp;
  for (int p = 0; p < g.k(); ++p)
    (mask >> p & 1 ? bp.side_a : bp.side_b).push_back(g.terminal_id(p));
  std::sort(bp.side_a.begin(), bp.side_a.end());
  std::sort(bp.side_b.begin(), bp.side_b.end());
  return bp;
}

inline uint64_t mask_from_side(const Instance& g, const std::vector<std::string>& side) {
  uint64_t mask = 0;
  for (const auto& id : side) {
    int i = g.index_of(id);
    int pos = -1;
    for (int p = 0; p < g.k(); ++p)
      if (g.terminals[p] == i) pos = p;
    if (pos < 0) throw input_error("not a terminal: " + id);
    if (mask >> pos & 1) throw input_error("repeated terminal in side: " + id);
    mask |= 1ull << pos;
  }
  return mask;
}

// All 2^(k-1)-1 proper splits in a fixed order: the anchor terminal always
// sits in side_a and the remaining positions count up in binary.
inline std::vector<uint64_t> enumerate_bipartitions(const Instance& g) {
  const int k = g.k();
  if (k < 2) return {};
  if (k > 25) throw input_error("too many terminals to enumerate bipartitions");
  const int anchor = anchor_position(g);
  std::vector<int> rest;
  for (int p = 0; p < k; ++p)
    if (p != anchor) rest.push_back(p);
  std::vector<uint64_t> out;
  out.reserve((1ull << (k - 1)) - 1);
  for (uint64_t m = 0; m + 1 < (1ull << (k - 1)); ++m) {
    uint64_t mask = 1ull << anchor;
    for (size_t j = 0; j < rest.size(); ++j)
      if (m >> j & 1) mask |= 1ull << rest[j];
    out.push_back(mask);
  }
  return out;
}

struct CutResult {
  Weight value;
  Bipartition bipartition;
  std::vector<std::string> source_side;  // sorted vertex ids, the unique minimal side
  std::vector<int> cut_edges;            // indices into g.edges, ascending
};

namespace detail {

// Residual-capacity arc store. Arc i and i^1 form an undirected or
// directed pair; pushing on one grows the other.
struct FlowNetwork {
  struct Arc {
    int to;
    Weight residual;
  };
  std::vector<Arc> arcs;
  std::vector<std::vector<int>> out;

  explicit FlowNetwork(int n) : out(n) {}

  void add_undirected(int u, int v, const Weight& cap) {
    out[u].push_back(static_cast<int>(arcs.size()));
    arcs.push_back({v, cap});
    out[v].push_back(static_cast<int>(arcs.size()));
    arcs.push_back({u, cap});
  }

  void add_directed(int u, int v, const Weight& cap) {
    out[u].push_back(static_cast<int>(arcs.size()));
    arcs.push_back({v, cap});
    out[v].push_back(static_cast<int>(arcs.size()));
    arcs.push_back({u, Weight(0)});
  }

  // Edmonds-Karp: repeatedly augment along a shortest residual path.
  Weight max_flow(int s, int t) {
    Weight flow = 0;
    const int n = static_cast<int>(out.size());
    std::vector<int> pred_arc(n);
    for (;;) {
      std::fill(pred_arc.begin(), pred_arc.end(), -1);
      pred_arc[s] = -2;
      std::deque<int> queue{s};
      while (!queue.empty() && pred_arc[t] == -1) {
        int v = queue.front();
        queue.pop_front();
        for (int a : out[v]) {
          if (arcs[a].residual == 0 || pred_arc[arcs[a].to] != -1) continue;
          pred_arc[arcs[a].to] = a;
          queue.push_back(arcs[a].to);
        }
      }
      if (pred_arc[t] == -1) return flow;
      Weight push = arcs[pred_arc[t]].residual;
      for (int v = t; v != s;) {
        int a = pred_arc[v];
        if (arcs[a].residual < push) push = arcs[a].residual;
        v = arcs[a ^ 1].to;
      }
      for (int v = t; v != s;) {
        int a = pred_arc[v];
        arcs[a].residual -= push;
        arcs[a ^ 1].residual += push;
        v = arcs[a ^ 1].to;
      }
      flow += push;
    }
  }

  std::vector<char> residual_reachable(int s) const {
    std::vector<char> seen(out.size(), 0);
    seen[s] = 1;
    std::vector<int> stack{s};
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int a : out[v]) {
        if (arcs[a].residual == 0 || seen[arcs[a].to]) continue;
        seen[arcs[a].to] = 1;
        stack.push_back(arcs[a].to);
      }
    }
    return seen;
  }
};

}  // namespace detail

// Minimum cut separating the terminals in mask from the rest. The reported
// source side is the residual-reachability closure of the source terminals,
// which is the unique inclusion-minimal minimum-cut side; it makes the result
// independent of augmentation order.
inline CutResult min_terminal_cut(const Instance& g, uint64_t side_a_mask) {
  const int k = g.k();
  if (k > 63) throw input_error("terminal mask limited to 63 terminals");
  const uint64_t full = (1ull << k) - 1;
  side_a_mask &= full;
  if (side_a_mask == 0 || side_a_mask == full)
    throw input_error("invalid bipartition: one side is empty");

  detail::FlowNetwork net(g.n() + 2);
  const int src = g.n(), snk = g.n() + 1;
  for (const auto& e : g.edges) net.add_undirected(e.u, e.v, e.w * e.mult);
  const Weight inf = total_weight(g) + 1;
  for (int p = 0; p < k; ++p)
    net.add_directed(side_a_mask >> p & 1 ? src : g.terminals[p],
                     side_a_mask >> p & 1 ? g.terminals[p] : snk, inf);

  CutResult r;
  r.value = net.max_flow(src, snk);
  r.bipartition = mask_to_bipartition(g, side_a_mask);

  std::vector<char> reach = net.residual_reachable(src);
  for (int i = 0; i < g.n(); ++i)
    if (reach[i]) r.source_side.push_back(g.ids[i]);
  std::sort(r.source_side.begin(), r.source_side.end());

  Weight crossing = 0;
  for (int i = 0; i < g.m(); ++i) {
    const auto& e = g.edges[i];
    if (reach[e.u] != reach[e.v]) {
      r.cut_edges.push_back(i);
      crossing += e.w * e.mult;
    }
  }
  if (crossing != r.value)
    throw std::logic_error("internal: cut weight disagrees with flow value");
  return r;
}

inline CutResult min_terminal_cut(const Instance& g, const std::vector<std::string>& side_a) {
  return min_terminal_cut(g, mask_from_side(g, side_a));
}

// 'A' for vertices on the canonical minimal source side, 'B' elsewhere.
// Vertices disconnected from every source terminal land on side B.
inline std::map<std::string, char> canonical_side_map(const Instance& g, uint64_t side_a_mask) {
  CutResult r = min_terminal_cut(g, side_a_mask);
  std::map<std::string, char> side;
  for (const auto& id : g.ids) side[id] = 'B';
  for (const auto& id : r.source_side) side[id] = 'A';
  return side;
}

inline std::map<std::string, char> canonical_side_map(const Instance& g,
                                                      const std::vector<std::string>& side_a) {
  return canonical_side_map(g, mask_from_side(g, side_a));
}

}  // namespace termcut
