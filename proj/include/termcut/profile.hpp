#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "termcut/graph.hpp"
#include "termcut/mincut.hpp"
#include "termcut/parallel.hpp"
#include "termcut/rng.hpp"

namespace termcut {

// Proper nonempty terminal subsets in the profile order: by size, then
// lexicographically as ascending position sequences. Masks are over
// positions in the terminal list.
inline std::vector<uint64_t> profile_subset_order(int k) {
  if (k < 1 || k > 25) throw input_error("profile subset order needs 1 <= k <= 25");
  std::vector<uint64_t> out;
  for (int s = 1; s < k; ++s) {
    std::vector<int> combo(s);
    for (int i = 0; i < s; ++i) combo[i] = i;
    for (;;) {
      uint64_t mask = 0;
      for (int i : combo) mask |= 1ull << i;
      out.push_back(mask);
      int j = s - 1;
      while (j >= 0 && combo[j] == k - s + j) --j;
      if (j < 0) break;
      ++combo[j];
      for (int i = j + 1; i < s; ++i) combo[i] = combo[i - 1] + 1;
    }
  }
  return out;
}

// One bit per proper nonempty subset S in profile order: 1 when the vertex
// leans into S, meaning w_v(S) > w_v(T \ S). Ties lean outward.
struct Profile {
  int k = 0;
  std::vector<char> bits;

  bool operator==(const Profile& o) const { return k == o.k && bits == o.bits; }
  bool operator<(const Profile& o) const {
    return k != o.k ? k < o.k : bits < o.bits;
  }
};

constexpr int kProfileCap = 16;

namespace detail {
inline std::vector<Weight> terminal_weights_at(const Instance& g, int v) {
  std::vector<int> pos(g.n(), -1);
  for (int p = 0; p < g.k(); ++p) pos[g.terminals[p]] = p;
  std::vector<Weight> w(g.k(), Weight(0));
  for (const auto& e : g.edges) {
    if (e.u != v && e.v != v) continue;
    int other = e.u == v ? e.v : e.u;
    if (pos[other] < 0)
      throw input_error("vertex " + g.ids[v] + " has a non-terminal neighbor");
    w[pos[other]] += e.w * e.mult;
  }
  return w;
}
}  // namespace detail

// Threshold profile of a non-terminal in a quasi-bipartite instance.
inline Profile star_profile(const Instance& g, const std::string& vertex_id) {
  int v = g.index_of(vertex_id);
  if (g.is_terminal[v]) throw input_error("profile of a terminal: " + vertex_id);
  if (g.k() > kProfileCap) throw input_error("too many terminals for profiles");
  std::vector<Weight> w = detail::terminal_weights_at(g, v);
  Weight total = 0;
  for (const auto& x : w) total += x;

  Profile p;
  p.k = g.k();
  for (uint64_t mask : profile_subset_order(g.k())) {
    Weight ws = 0;
    for (int i = 0; i < g.k(); ++i)
      if (mask >> i & 1) ws += w[i];
    p.bits.push_back(2 * ws > total ? 1 : 0);
  }
  return p;
}

// Min-cut profile for general graphs: bit 1 when the vertex lands on the
// canonical source side of the subset's minimum terminal cut. On
// quasi-bipartite instances this coincides with star_profile; it is kept as
// a separate entry point for experiments and is not used by the sparsifier.
inline std::map<std::string, Profile> mincut_profiles(const Instance& g) {
  if (g.k() > kProfileCap) throw input_error("too many terminals for profiles");
  const std::vector<uint64_t> order = profile_subset_order(g.k());
  std::vector<std::map<std::string, char>> sides(order.size());
  parallel_for(order.size(), [&](size_t i) { sides[i] = canonical_side_map(g, order[i]); });

  std::map<std::string, Profile> out;
  for (int v = 0; v < g.n(); ++v) {
    if (g.is_terminal[v]) continue;
    Profile p;
    p.k = g.k();
    p.bits.reserve(order.size());
    for (const auto& side : sides)
      p.bits.push_back(side.at(g.ids[v]) == 'A' ? 1 : 0);
    out.emplace(g.ids[v], std::move(p));
  }
  return out;
}

inline size_t count_distinct_profiles(const Instance& g) {
  std::set<Profile> seen;
  for (int v : g.sorted_nonterminals()) seen.insert(star_profile(g, g.ids[v]));
  return seen.size();
}

struct SparsifierResult {
  Instance h;
  ContractionMap contraction;
};

// Contracts together all non-terminals sharing a threshold profile. On
// quasi-bipartite instances this preserves every terminal min-cut exactly.
inline SparsifierResult exact_sparsifier(const Instance& g) {
  if (!is_quasi_bipartite(g)) throw input_error("exact sparsifier needs a quasi-bipartite instance");
  std::vector<std::vector<std::string>> classes;
  for (int t : g.terminals) classes.push_back({g.ids[t]});

  std::map<Profile, size_t> group_of;
  for (int v : g.sorted_nonterminals()) {
    Profile p = star_profile(g, g.ids[v]);
    auto it = group_of.find(p);
    if (it == group_of.end()) {
      group_of.emplace(std::move(p), classes.size());
      classes.push_back({g.ids[v]});
    } else {
      classes[it->second].push_back(g.ids[v]);
    }
  }
  SparsifierResult r;
  r.contraction = make_contraction(g, classes);
  r.h = contract(g, r.contraction);
  return r;
}

// Hard instance: one star center per even-size proper subset S, adjacent to
// exactly the terminals of S with weights packed inside (1-2^-k, 1+2^-k).
// The tight interval keeps every threshold comparison generic: each bit is
// decided by which incident terminals outweigh the rest, never by ties.
inline Instance gen_profile_lowerbound(int k, uint64_t seed) {
  if (k < 2 || k > 20) throw input_error("profile lower bound generator needs 2 <= k <= 20");
  std::vector<std::string> tids;
  for (int i = 1; i <= k; ++i) tids.push_back("t" + std::to_string(i));

  const mpz_class den = mpz_class(1) << (3 * k);
  const mpz_class lo = den - (mpz_class(1) << (2 * k)) + 1;
  const uint64_t span = (1ull << (2 * k + 1)) - 1;  // numerators lo .. lo+span-1
  Rng rng(derive_seed(seed, "profile-lowerbound"));

  std::vector<std::string> vids = tids;
  std::vector<EdgeSpec> specs;
  for (uint64_t mask : profile_subset_order(k)) {
    if (__builtin_popcountll(mask) % 2 != 0) continue;
    std::string center = "v";
    for (int i = 0; i < k; ++i)
      if (mask >> i & 1) center += (center.size() > 1 ? "_" : "") + std::to_string(i + 1);
    vids.push_back(center);
    for (int i = 0; i < k; ++i) {
      if (!(mask >> i & 1)) continue;
      Weight w = make_weight(lo + mpz_class(rng.below(span)), den);
      specs.push_back(EdgeSpec{center, tids[i], w, 1});
    }
  }
  return make_instance(vids, tids, specs);
}

// Two disjoint subfamilies hitting every terminal equally often, if any
// exist. Searches collisions size by size; the first colliding pair, with
// common members stripped, is returned.
inline std::optional<std::pair<std::vector<std::vector<std::string>>,
                               std::vector<std::vector<std::string>>>>
find_similar_pair(const std::vector<std::vector<std::string>>& family) {
  const int n = static_cast<int>(family.size());
  if (n > 24) throw input_error("similar pair search limited to 24 subsets");

  std::vector<std::string> universe;
  std::vector<std::vector<int>> members;
  {
    std::map<std::string, int> uidx;
    std::set<std::vector<int>> seen;
    for (const auto& sub : family) {
      std::vector<int> enc;
      std::set<std::string> inside;
      for (const auto& id : sub) {
        if (!inside.insert(id).second) throw input_error("repeated terminal inside a subset: " + id);
        enc.push_back(uidx.emplace(id, static_cast<int>(uidx.size())).first->second);
      }
      std::sort(enc.begin(), enc.end());
      if (!seen.insert(enc).second) throw input_error("family contains a duplicate subset");
      members.push_back(std::move(enc));
    }
    universe.resize(uidx.size());
    for (const auto& [id, i] : uidx) universe[i] = id;
  }

  const int u = static_cast<int>(universe.size());
  auto counts_of = [&](uint32_t mask) {
    std::vector<uint8_t> c(u, 0);
    for (int i = 0; i < n; ++i)
      if (mask >> i & 1)
        for (int t : members[i]) ++c[t];
    return c;
  };
  auto found = [&](uint32_t a, uint32_t b) {
    const uint32_t common = a & b;
    std::pair<std::vector<std::vector<std::string>>, std::vector<std::vector<std::string>>> r;
    for (int i = 0; i < n; ++i) {
      if (common >> i & 1) continue;
      std::vector<std::string> sub;
      for (int t : members[i]) sub.push_back(universe[t]);
      std::sort(sub.begin(), sub.end());
      if (a >> i & 1) r.first.push_back(std::move(sub));
      else if (b >> i & 1) r.second.push_back(std::move(sub));
    }
    return r;
  };

  for (int s = 1; s <= n / 2; ++s) {
    std::unordered_map<uint64_t, std::vector<uint32_t>> buckets;
    std::vector<int> combo(s);
    for (int i = 0; i < s; ++i) combo[i] = i;
    for (;;) {
      uint32_t mask = 0;
      for (int i : combo) mask |= 1u << i;
      std::vector<uint8_t> counts = counts_of(mask);
      uint64_t h = 0xcbf29ce484222325ull;
      for (uint8_t c : counts) {
        h ^= c;
        h *= 0x100000001b3ull;
      }
      for (uint32_t prior : buckets[h])
        if (counts_of(prior) == counts) return found(prior, mask);
      buckets[h].push_back(mask);
      int j = s - 1;
      while (j >= 0 && combo[j] == n - s + j) --j;
      if (j < 0) break;
      ++combo[j];
      for (int i = j + 1; i < s; ++i) combo[i] = combo[i - 1] + 1;
    }
  }
  return std::nullopt;
}

}  // namespace termcut
