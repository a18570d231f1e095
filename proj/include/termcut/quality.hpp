#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "termcut/graph.hpp"
#include "termcut/mincut.hpp"
#include "termcut/parallel.hpp"
#include "termcut/rng.hpp"

namespace termcut {

struct CutPair {
  Bipartition bipartition;
  Weight value_g;
  Weight value_h;
};

// Outcome of comparing all (or sampled) terminal min-cuts of h against g.
// quality is the largest two-sided ratio max(vg/vh, vh/vg) over the checked
// cuts, 1 when both values vanish. A cut where exactly one side is zero has
// no finite ratio and sets the infinite flag instead.
struct QualityReport {
  Weight quality = 1;
  bool infinite = false;
  bool exhaustive = true;
  Bipartition witness;                       // first cut attaining the reported quality
  std::vector<Bipartition> lower_violations; // cuts with value_h > value_g
  std::vector<CutPair> per_cut;
};

struct VerifyOptions {
  int cap = 16;        // largest k verified exhaustively
  bool sampled = false;
  size_t sample_count = 64;
  uint64_t seed = 0;
  std::vector<uint64_t> extra_masks;  // always included in sampled mode
};

inline QualityReport verify_quality(const Instance& g, const Instance& h,
                                    const VerifyOptions& opts = {}) {
  if (g.terminal_ids() != h.terminal_ids())
    throw input_error("verify requires identical terminal lists");
  const int k = g.k();

  QualityReport rep;
  if (k < 2) return rep;

  std::vector<uint64_t> masks;
  if (!opts.sampled) {
    if (k > opts.cap)
      throw input_error("instance has too many terminals for exhaustive verification; sample instead");
    masks = enumerate_bipartitions(g);
  } else {
    if (k > 63) throw input_error("sampled verification limited to 63 terminals");
    rep.exhaustive = false;
    std::set<uint64_t> chosen;
    for (uint64_t m : opts.extra_masks) chosen.insert(canonicalize_mask(g, m));
    const uint64_t proper = (1ull << k) - 2;  // masks 1 .. 2^k-2 are proper splits
    Rng rng(opts.seed);
    const size_t want = std::min<size_t>(chosen.size() + opts.sample_count,
                                         k >= 26 ? SIZE_MAX : (1ull << (k - 1)) - 1);
    while (chosen.size() < want)
      chosen.insert(canonicalize_mask(g, 1 + rng.below(proper)));
    masks.assign(chosen.begin(), chosen.end());
  }

  std::vector<CutPair> cuts(masks.size());
  parallel_for(masks.size(), [&](size_t i) {
    cuts[i].bipartition = mask_to_bipartition(g, masks[i]);
    cuts[i].value_g = min_terminal_cut(g, masks[i]).value;
    cuts[i].value_h = min_terminal_cut(h, masks[i]).value;
  });

  int finite_at = -1, infinite_at = -1;
  for (size_t i = 0; i < cuts.size(); ++i) {
    const Weight& vg = cuts[i].value_g;
    const Weight& vh = cuts[i].value_h;
    if (vh > vg) rep.lower_violations.push_back(cuts[i].bipartition);
    if (vg == 0 && vh == 0) continue;
    if (vg == 0 || vh == 0) {
      rep.infinite = true;
      if (infinite_at < 0) infinite_at = static_cast<int>(i);
      continue;
    }
    Weight ratio = vg > vh ? Weight(vg / vh) : Weight(vh / vg);
    if (ratio > rep.quality) {
      rep.quality = ratio;
      finite_at = static_cast<int>(i);
    }
  }
  // quality reports the largest finite ratio even when some cut is infinite;
  // the witness points at the infinite cut in that case.
  int witness_at = rep.infinite ? infinite_at : finite_at;
  if (witness_at < 0 && !cuts.empty()) witness_at = 0;
  if (witness_at >= 0) rep.witness = cuts[witness_at].bipartition;
  rep.per_cut = std::move(cuts);
  return rep;
}

struct ContractionCheck {
  bool matches = true;
  std::string diff;
};

// Checks that h equals contract(g, m) exactly: same vertex ids, same terminal
// list, and the same edge weight multiset between every vertex pair.
inline ContractionCheck verify_contraction(const Instance& g, const Instance& h,
                                           const ContractionMap& m) {
  Instance c = contract(g, m);
  ContractionCheck out;
  auto fail = [&](const std::string& msg) {
    out.matches = false;
    out.diff = msg;
    return out;
  };

  std::set<std::string> cv(c.ids.begin(), c.ids.end());
  std::set<std::string> hv(h.ids.begin(), h.ids.end());
  if (cv != hv) {
    for (const auto& id : cv)
      if (!hv.count(id)) return fail("missing vertex " + id);
    for (const auto& id : hv)
      if (!cv.count(id)) return fail("unexpected vertex " + id);
  }
  if (c.terminal_ids() != h.terminal_ids()) return fail("terminal lists differ");

  using Key = std::tuple<std::string, std::string, Weight>;
  auto edge_mass = [](const Instance& x) {
    std::map<Key, long> mass;
    for (const auto& e : x.edges) {
      std::string a = x.ids[e.u], b = x.ids[e.v];
      if (b < a) std::swap(a, b);
      mass[{a, b, e.w}] += e.mult;
    }
    return mass;
  };
  auto cm = edge_mass(c), hm = edge_mass(h);
  if (cm != hm) {
    for (const auto& [key, mult] : cm) {
      auto it = hm.find(key);
      if (it == hm.end() || it->second != mult)
        return fail("edge multiset differs at " + std::get<0>(key) + "-" + std::get<1>(key));
    }
    for (const auto& [key, mult] : hm)
      if (!cm.count(key))
        return fail("edge multiset differs at " + std::get<0>(key) + "-" + std::get<1>(key));
  }
  return out;
}

// Composes per-stage quality bounds along a chain of sparsifiers.
inline Weight observed_quality_chain(const Weight& q1, const Weight& q2) {
  if (q1 < 1 || q2 < 1) throw input_error("quality factors must be at least 1");
  return q1 * q2;
}

}  // namespace termcut
