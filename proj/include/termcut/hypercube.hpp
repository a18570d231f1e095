#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "termcut/graph.hpp"
#include "termcut/mincut.hpp"
#include "termcut/parallel.hpp"
#include "termcut/quality.hpp"

namespace termcut {

// Hypercube-labelled hard instance. Vertex ids are their own d-bit labels:
// terminals sit on the boundary weight layers plus the two apexes, the
// middle layer is non-terminal.
struct BhcInstance {
  Instance instance;
  int d = 0;
  Weight epsilon;
  std::map<std::string, std::string> labels;
};

// Assignment of a d-bit string to every vertex.
struct Mapping {
  std::map<std::string, std::string> image;
};

namespace detail {

inline long binomial(int n, int r) {
  if (r < 0 || r > n) return 0;
  long out = 1;
  for (int i = 1; i <= r; ++i) out = out * (n - r + i) / i;
  return out;
}

inline std::vector<std::string> strings_of_weight(int d, int w) {
  std::vector<std::string> out;
  if (w < 0 || w > d) return out;
  std::vector<int> combo(w);
  for (int i = 0; i < w; ++i) combo[i] = i;
  for (;;) {
    std::string s(d, '0');
    for (int i : combo) s[i] = '1';
    out.push_back(std::move(s));
    int j = w - 1;
    while (j >= 0 && combo[j] == d - w + j) --j;
    if (j < 0) break;
    ++combo[j];
    for (int i = j + 1; i < w; ++i) combo[i] = combo[i - 1] + 1;
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline int hamming(const std::string& a, const std::string& b) {
  int dist = 0;
  for (size_t i = 0; i < a.size(); ++i) dist += a[i] != b[i];
  return dist;
}

}  // namespace detail

// Builds the layered hypercube instance: terminals at weights eps*d and
// (1-eps)*d plus the all-zeros and all-ones apexes, one non-terminal per
// middle-layer string. Each middle vertex gets a unit edge to every terminal
// at distance (1/2-eps)*d and an apex edge of multiplicity C(d/2, eps*d).
inline BhcInstance gen_hypercube_instance(int d, const Weight& epsilon) {
  if (d < 2 || d % 2 != 0) throw input_error("dimension must be even and at least 2");
  if (d > 16) throw input_error("dimension capped at 16");
  if (epsilon <= 0 || 2 * epsilon >= 1) throw input_error("epsilon must lie strictly between 0 and 1/2");
  const Weight ed_q = epsilon * d;
  if (ed_q.get_den() != 1) throw input_error("epsilon * d must be an integer");
  const int ed = static_cast<int>(ed_q.get_num().get_si());
  if (ed < 1) throw input_error("epsilon * d must be at least 1");
  const int hd = d / 2;

  BhcInstance b;
  b.d = d;
  b.epsilon = epsilon;

  const std::vector<std::string> t0 = detail::strings_of_weight(d, ed);
  const std::vector<std::string> t1 = detail::strings_of_weight(d, d - ed);
  const std::vector<std::string> mid = detail::strings_of_weight(d, hd);
  const std::string apex0(d, '0'), apex1(d, '1');

  std::vector<std::string> tids;
  tids.insert(tids.end(), t0.begin(), t0.end());
  tids.insert(tids.end(), t1.begin(), t1.end());
  tids.push_back(apex0);
  tids.push_back(apex1);
  std::sort(tids.begin(), tids.end());

  std::vector<std::string> vids = tids;
  vids.insert(vids.end(), mid.begin(), mid.end());
  std::sort(vids.begin(), vids.end());

  const long apex_mult = detail::binomial(hd, ed);
  std::vector<EdgeSpec> specs;
  for (const auto& v : mid) {
    std::vector<std::string> low, high;
    for (const auto& t : t0)
      if (detail::hamming(v, t) == hd - ed) low.push_back(t);
    for (const auto& t : t1)
      if (detail::hamming(v, t) == hd - ed) high.push_back(t);
    for (const auto& t : low) specs.push_back(EdgeSpec{v, t, Weight(1), 1});
    for (const auto& t : high) specs.push_back(EdgeSpec{v, t, Weight(1), 1});
    specs.push_back(EdgeSpec{v, apex0, Weight(1), apex_mult});
    specs.push_back(EdgeSpec{v, apex1, Weight(1), apex_mult});
  }

  b.instance = make_instance(vids, tids, specs);
  for (const auto& id : vids) b.labels[id] = id;
  return b;
}

// Exact sum of mult * w * hamming distances under the mapping, divided by
// the same sum under the original labels.
inline Weight stretch(const BhcInstance& b, const Mapping& f) {
  const Instance& g = b.instance;
  auto bits_of = [&](const std::map<std::string, std::string>& m, const std::string& id) -> const std::string& {
    auto it = m.find(id);
    if (it == m.end()) throw input_error("mapping misses vertex " + id);
    if (static_cast<int>(it->second.size()) != b.d)
      throw input_error("mapping image has wrong length at " + id);
    for (char c : it->second)
      if (c != '0' && c != '1') throw input_error("mapping image is not binary at " + id);
    return it->second;
  };
  Weight num = 0, den = 0;
  for (const auto& e : g.edges) {
    const Weight cap = e.w * e.mult;
    num += cap * detail::hamming(bits_of(f.image, g.ids[e.u]), bits_of(f.image, g.ids[e.v]));
    den += cap * detail::hamming(bits_of(b.labels, g.ids[e.u]), bits_of(b.labels, g.ids[e.v]));
  }
  if (den == 0) throw input_error("label distances sum to zero");
  return num / den;
}

// Side-a masks of the d coordinate splits (terminals whose label bit i is 0),
// in terminal list order. These drive sampled verification for large k.
inline std::vector<uint64_t> coordinate_masks(const BhcInstance& b) {
  const Instance& g = b.instance;
  if (g.k() > 63) throw input_error("coordinate masks limited to 63 terminals");
  std::vector<uint64_t> masks(b.d, 0);
  for (int p = 0; p < g.k(); ++p) {
    const std::string& label = b.labels.at(g.terminal_id(p));
    for (int i = 0; i < b.d; ++i)
      if (label[i] == '0') masks[i] |= 1ull << p;
  }
  return masks;
}

// Reads a mapping off a contraction: coordinate i of a supernode is 0 when
// the supernode lands on the canonical source side of the cut separating the
// 0-labelled terminals. Terminals always recover their own labels.
inline Mapping sparsifier_to_mapping(const BhcInstance& b, const Instance& h,
                                     const ContractionMap& m) {
  ContractionCheck chk = verify_contraction(b.instance, h, m);
  if (!chk.matches) throw input_error("not a contraction of the instance: " + chk.diff);

  // Coordinate masks are positions in b's terminal list; h shares that list.
  const std::vector<uint64_t> masks = coordinate_masks(b);
  std::vector<std::map<std::string, char>> side(b.d);
  parallel_for(side.size(), [&](size_t i) { side[i] = canonical_side_map(h, masks[i]); });

  std::map<std::string, std::string> super_bits;
  for (const auto& id : h.ids) {
    std::string bits(b.d, '1');
    for (int i = 0; i < b.d; ++i)
      if (side[i].at(id) == 'A') bits[i] = '0';
    super_bits.emplace(id, std::move(bits));
  }

  std::map<std::string, std::string> rep_of;
  for (size_t c = 0; c < m.classes.size(); ++c)
    for (const auto& id : m.classes[c]) rep_of[id] = m.representatives[c];

  Mapping f;
  for (const auto& id : b.instance.ids) f.image[id] = super_bits.at(rep_of.at(id));
  return f;
}

}  // namespace termcut
