#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "termcut/graph.hpp"
#include "termcut/mincut.hpp"
#include "termcut/profile.hpp"
#include "termcut/rng.hpp"

namespace termcut {

struct SamplingParams {
  Weight epsilon;
  long c = 0;      // heavy threshold divisor and sketch size, ceil(100/eps^2)
  Weight eta;      // importance floor, eps^4 / (1000 k)
  uint64_t seed = 0;
};

inline SamplingParams make_sampling_params(const Weight& epsilon, int k, uint64_t seed) {
  if (epsilon <= 0) throw input_error("epsilon must be positive");
  if (k < 1) throw input_error("need at least one terminal");
  SamplingParams p;
  p.epsilon = epsilon;
  p.c = ceil_to_long(Weight(100) / (epsilon * epsilon));
  if (p.c > 10'000'000) throw input_error("epsilon too small, sketch budget would be enormous");
  p.eta = epsilon * epsilon * epsilon * epsilon / (1000 * k);
  p.seed = seed;
  return p;
}

// Compressed star. Either the original edges verbatim (small stars) or the
// heavy edges plus c-h sampled slots. Total weight always equals the
// original star weight exactly.
struct StarSketch {
  std::string center;
  bool verbatim = false;
  Weight total;
  std::vector<std::pair<std::string, Weight>> heavy_edges;    // one entry per kept edge copy
  std::vector<std::pair<std::string, Weight>> sampled_slots;  // per drawn terminal, accumulated

  size_t edge_count() const { return heavy_edges.size() + sampled_slots.size(); }
};

// Draws light edges with probability proportional to weight. The cumulative
// distribution is quantized once onto the full 64-bit lattice, so each draw
// is a single word comparison against precomputed bucket bounds.
class StarSampler {
 public:
  StarSampler(std::vector<std::string> terminals, const std::vector<Weight>& weights)
      : terminal_(std::move(terminals)) {
    assert(terminal_.size() == weights.size() && !weights.empty());
    for (const auto& w : weights) total_ += w;
    // Edge i owns u-values in [bound(i-1), bound(i)) where
    // bound(i) = ceil(cum_i * 2^64 / total); stored inclusive so the last
    // bound, exactly 2^64, still fits a word.
    max_u_.reserve(weights.size());
    Weight running = 0;
    for (const auto& w : weights) {
      running += w;
      Weight frac = running / total_;
      mpz_class num = frac.get_num();
      mpz_mul_2exp(num.get_mpz_t(), num.get_mpz_t(), 64);
      mpz_class bound;
      mpz_cdiv_q(bound.get_mpz_t(), num.get_mpz_t(), frac.get_den().get_mpz_t());
      bound -= 1;
      assert(bound >= 0 && mpz_sizeinbase(bound.get_mpz_t(), 2) <= 64);
      max_u_.push_back(mpz_get_ui(bound.get_mpz_t()));
    }
  }

  size_t size() const { return terminal_.size(); }
  const std::string& terminal(size_t i) const { return terminal_[i]; }
  const Weight& total() const { return total_; }

  size_t draw(Rng& rng) const {
    uint64_t u = rng.next_u64();
    size_t i = std::lower_bound(max_u_.begin(), max_u_.end(), u) - max_u_.begin();
    return i < max_u_.size() ? i : max_u_.size() - 1;
  }

 private:
  std::vector<std::string> terminal_;
  std::vector<Weight> max_u_;
  Weight total_ = 0;
};

// Sketches a star around a non-terminal center. Stars with at most c edge
// copies are kept verbatim; otherwise heavy edges (weight at least w/c) stay
// and the light remainder is filled by c-h weighted draws sharing the light
// weight equally. salt indexes independent re-draws under the same params.
inline StarSketch sparsify_star(const Instance& gv, const SamplingParams& p, uint64_t salt = 0) {
  int center = -1;
  for (int i = 0; i < gv.n(); ++i) {
    if (gv.is_terminal[i]) continue;
    if (center >= 0) throw input_error("star has two non-terminals");
    center = i;
  }
  if (center < 0) throw input_error("star has no non-terminal center");
  for (const auto& e : gv.edges)
    if (e.u != center && e.v != center)
      throw input_error("edge not incident to the star center");

  StarSketch sk;
  sk.center = gv.ids[center];
  sk.total = 0;

  std::vector<std::string> term;  // expanded edge copies in record order
  std::vector<Weight> weight;
  for (const auto& e : gv.edges) {
    const std::string& t = gv.ids[e.u == center ? e.v : e.u];
    for (long c = 0; c < e.mult; ++c) {
      term.push_back(t);
      weight.push_back(e.w);
      sk.total += e.w;
    }
  }

  if (static_cast<long>(term.size()) <= p.c) {
    sk.verbatim = true;
    for (size_t i = 0; i < term.size(); ++i) sk.heavy_edges.emplace_back(term[i], weight[i]);
    return sk;
  }

  const Weight& w = sk.total;
  std::vector<std::string> light_term;
  std::vector<Weight> light_weight;
  Weight heavy_total = 0;
  for (size_t i = 0; i < term.size(); ++i) {
    if (weight[i] * p.c >= w) {
      sk.heavy_edges.emplace_back(term[i], weight[i]);
      heavy_total += weight[i];
    } else {
      light_term.push_back(term[i]);
      light_weight.push_back(weight[i]);
    }
  }
  const long h = static_cast<long>(sk.heavy_edges.size());
  // With more than c positive-weight edges, not all can be heavy: h copies of
  // weight >= w/c already reach w only if nothing is light.
  assert(h < p.c && !light_term.empty());

  StarSampler sampler(std::move(light_term), light_weight);
  Rng rng(derive_seed(derive_seed(p.seed, sk.center), salt));
  std::map<size_t, long> hits;  // light edge index -> draw count
  for (long d = 0; d < p.c - h; ++d) ++hits[sampler.draw(rng)];

  const Weight slot = (w - heavy_total) / (p.c - h);
  std::map<std::string, size_t> slot_of;
  for (const auto& [idx, count] : hits) {
    const std::string& t = sampler.terminal(idx);
    auto it = slot_of.find(t);
    if (it == slot_of.end()) {
      slot_of.emplace(t, sk.sampled_slots.size());
      sk.sampled_slots.emplace_back(t, slot * count);
    } else {
      sk.sampled_slots[it->second].second += slot * count;
    }
  }
  return sk;
}

// Side the sketch assigns to terminal subset S: 'A' when the sketched weight
// into S exceeds half the star, 'B' otherwise (ties included).
inline char sketch_side(const StarSketch& sk, const std::set<std::string>& side_a) {
  Weight in = 0;
  for (const auto& [t, w] : sk.heavy_edges)
    if (side_a.count(t)) in += w;
  for (const auto& [t, w] : sk.sampled_slots)
    if (side_a.count(t)) in += w;
  return 2 * in > sk.total ? 'A' : 'B';
}

// Grouping key: two unimportant vertices are merged exactly when their
// sketches touch the same terminals and decide every subset the same way.
// Past 20 leaves the decision table is replaced by the exact weight profile,
// a finer and therefore still sound key.
inline std::string sketch_key(const StarSketch& sk) {
  std::map<std::string, Weight> leaf;
  for (const auto& [t, w] : sk.heavy_edges) leaf[t] += w;
  for (const auto& [t, w] : sk.sampled_slots) leaf[t] += w;

  std::string key = "L:";
  for (const auto& [t, w] : leaf) key += std::to_string(t.size()) + ":" + t + ";";
  const size_t L = leaf.size();
  if (L > 20) {
    key += "|W:";
    for (const auto& [t, w] : leaf) key += format_weight(w) + ";";
    return key;
  }
  std::vector<Weight> w(leaf.size());
  size_t i = 0;
  for (const auto& [t, wt] : leaf) w[i++] = wt;
  std::vector<Weight> sum(1ull << L);
  key += "|D:";
  char byte = 0;
  for (uint64_t mask = 0; mask < (1ull << L); ++mask) {
    if (mask) sum[mask] = sum[mask & (mask - 1)] + w[__builtin_ctzll(mask)];
    const bool a = 2 * sum[mask] > sk.total;
    byte = static_cast<char>(byte | (a ? 1 : 0) << (mask % 8));
    if (mask % 8 == 7) {
      key += byte;
      byte = 0;
    }
  }
  if ((1ull << L) % 8 != 0) key += byte;
  return key;
}

namespace detail {

struct SpecialCut {
  uint64_t mask;  // canonical side-a mask
  Weight value;   // pair min-cut value, equals the bipartition min-cut value
};

// Minimum cut separating one terminal pair, all other terminals free.
inline std::vector<SpecialCut> special_cuts_with_values(const Instance& g) {
  std::vector<SpecialCut> out;
  std::set<uint64_t> seen;
  std::vector<int> pos(g.n(), -1);
  for (int p = 0; p < g.k(); ++p) pos[g.terminals[p]] = p;

  for (int p = 0; p < g.k(); ++p) {
    for (int q = p + 1; q < g.k(); ++q) {
      FlowNetwork net(g.n());
      for (const auto& e : g.edges) net.add_undirected(e.u, e.v, e.w * e.mult);
      Weight value = net.max_flow(g.terminals[p], g.terminals[q]);
      std::vector<char> reach = net.residual_reachable(g.terminals[p]);
      uint64_t mask = 0;
      for (int t = 0; t < g.k(); ++t)
        if (reach[g.terminals[t]]) mask |= 1ull << t;
      mask = canonicalize_mask(g, mask);
      if (seen.insert(mask).second) out.push_back({mask, value});
    }
  }
  return out;
}

}  // namespace detail

inline std::vector<Bipartition> special_cuts(const Instance& g) {
  std::vector<Bipartition> out;
  for (const auto& sc : detail::special_cuts_with_values(g))
    out.push_back(mask_to_bipartition(g, sc.mask));
  return out;
}

// Weight the star of v sends into side_a, capped by the opposite side.
inline Weight cut_contribution(const Instance& g, const std::string& vertex_id,
                               const std::vector<std::string>& side_a) {
  int v = g.index_of(vertex_id);
  if (g.is_terminal[v]) throw input_error("contribution of a terminal: " + vertex_id);
  std::vector<Weight> w = detail::terminal_weights_at(g, v);
  uint64_t mask = mask_from_side(g, side_a);
  Weight in = 0, total = 0;
  for (int p = 0; p < g.k(); ++p) {
    total += w[p];
    if (mask >> p & 1) in += w[p];
  }
  Weight rest = total - in;
  return in < rest ? in : rest;
}

// Vertices whose star carries a nonzero eta/k fraction of some special cut.
// Everything else can be sketched without hurting any terminal min-cut by
// more than the sampling error.
inline std::vector<std::string> important_vertices(const Instance& g, const SamplingParams& p) {
  if (!is_quasi_bipartite(g)) throw input_error("importance analysis needs a quasi-bipartite instance");
  const auto cuts = detail::special_cuts_with_values(g);
  std::vector<std::string> out;
  for (int v : g.sorted_nonterminals()) {
    std::vector<Weight> w = detail::terminal_weights_at(g, v);
    Weight total = 0;
    for (const auto& x : w) total += x;
    for (const auto& sc : cuts) {
      Weight in = 0;
      for (int t = 0; t < g.k(); ++t)
        if (sc.mask >> t & 1) in += w[t];
      Weight rest = total - in;
      Weight contribution = in < rest ? in : rest;
      if (contribution > 0 && contribution * g.k() >= p.eta * sc.value) {
        out.push_back(g.ids[v]);
        break;
      }
    }
  }
  return out;
}

struct ApproxResult {
  Instance h;
  ContractionMap contraction;
  size_t important_count = 0;
  size_t group_count = 0;
};

// One randomized sparsification attempt: keep terminals and important
// vertices, sketch every other star, contract sketch-equivalent vertices.
// Quality is not guaranteed per attempt; callers verify and retry with a
// fresh seed on a miss.
inline ApproxResult approx_sparsifier(const Instance& g, const SamplingParams& p) {
  if (!is_quasi_bipartite(g)) throw input_error("approximate sparsifier needs a quasi-bipartite instance");
  std::vector<std::string> important = important_vertices(g, p);
  std::set<std::string> important_set(important.begin(), important.end());

  std::vector<std::vector<std::string>> classes;
  for (int t : g.terminals) classes.push_back({g.ids[t]});
  for (const auto& id : important) classes.push_back({id});

  std::map<std::string, size_t> group_of;
  size_t groups = 0;
  for (int v : g.sorted_nonterminals()) {
    const std::string& id = g.ids[v];
    if (important_set.count(id)) continue;
    std::string key = sketch_key(sparsify_star(star_of(g, id), p));
    auto it = group_of.find(key);
    if (it == group_of.end()) {
      group_of.emplace(std::move(key), classes.size());
      classes.push_back({id});
      ++groups;
    } else {
      classes[it->second].push_back(id);
    }
  }

  ApproxResult r;
  r.important_count = important.size();
  r.group_count = groups;
  r.contraction = make_contraction(g, classes);
  r.h = contract(g, r.contraction);
  return r;
}

}  // namespace termcut
