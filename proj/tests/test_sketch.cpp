#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "termcut/generators.hpp"
#include "termcut/quality.hpp"
#include "termcut/sketch.hpp"

using namespace termcut;

TEST_CASE("sampling parameters") {
  SECTION("budget and importance floor") {
    SamplingParams p = make_sampling_params(make_weight(1, 2), 4, 9);
    CHECK(p.c == 400);
    CHECK(p.eta == make_weight(1, 64000));
    CHECK(p.seed == 9);

    CHECK(make_sampling_params(Weight(1), 6, 0).c == 100);
    CHECK(make_sampling_params(Weight(1), 6, 0).eta == make_weight(1, 6000));
    CHECK(make_sampling_params(Weight(10), 2, 0).c == 1);
    CHECK(make_sampling_params(Weight(3), 2, 0).c == 12);  // ceil(100/9)
    CHECK(make_sampling_params(Weight(2), 6, 0).eta == make_weight(2, 750));
  }
  SECTION("rejects bad ranges") {
    CHECK_THROWS_AS(make_sampling_params(Weight(0), 4, 0), input_error);
    CHECK_THROWS_AS(make_sampling_params(Weight(-1), 4, 0), input_error);
    CHECK_THROWS_AS(make_sampling_params(Weight(1), 0, 0), input_error);
    // c = 10^8 would overflow the sketch budget cap.
    CHECK_THROWS_AS(make_sampling_params(make_weight(1, 1000), 4, 0), input_error);
  }
}

TEST_CASE("star sketching") {
  SECTION("small stars pass through verbatim") {
    Instance g = oracle::star({{"t1", Weight(2)}, {"t2", Weight(3)}, {"t3", Weight(4)}});
    SamplingParams p = make_sampling_params(Weight(1), 3, 5);
    StarSketch sk = sparsify_star(g, p);
    CHECK(sk.verbatim);
    CHECK(sk.center == "v");
    CHECK(sk.total == Weight(9));
    REQUIRE(sk.heavy_edges.size() == 3);
    CHECK(sk.sampled_slots.empty());
    CHECK(sk.heavy_edges[0] == std::make_pair(std::string("t1"), Weight(2)));
    CHECK(sk.heavy_edges[2] == std::make_pair(std::string("t3"), Weight(4)));
  }

  SECTION("heavy edges kept, light mass spread over equal slots") {
    // One weight-5 arm and five unit arms, budget c = 5 (epsilon = 9/2 gives
    // ceil(100/20.25) = 5). Threshold w/c = 2, so only the weight-5 edge is
    // heavy; the remaining 4 slots each carry (10-5)/4.
    Instance g = oracle::star({{"t1", Weight(5)},
                               {"t2", Weight(1)},
                               {"t3", Weight(1)},
                               {"t4", Weight(1)},
                               {"t5", Weight(1)},
                               {"t6", Weight(1)}});
    SamplingParams p = make_sampling_params(make_weight(9, 2), 6, 77);
    REQUIRE(p.c == 5);
    StarSketch sk = sparsify_star(g, p);
    CHECK_FALSE(sk.verbatim);
    CHECK(sk.total == Weight(10));
    REQUIRE(sk.heavy_edges.size() == 1);
    CHECK(sk.heavy_edges[0] == std::make_pair(std::string("t1"), Weight(5)));
    CHECK(sk.edge_count() <= 5);

    Weight sampled_mass = 0;
    const Weight slot = make_weight(5, 4);
    for (const auto& [t, w] : sk.sampled_slots) {
      CHECK(t != "t1");  // heavy terminals are never drawn
      // Accumulated duplicates keep each record a whole number of slots.
      Weight ratio = w / slot;
      CHECK(ratio.get_den() == 1);
      CHECK(ratio >= 1);
      sampled_mass += w;
    }
    CHECK(sampled_mass == Weight(5));
    CHECK(sk.total == sampled_mass + Weight(5));
  }

  SECTION("multiplicities count as separate copies") {
    Instance g = make_instance({"v", "t1", "t2"}, {"t1", "t2"},
                               {{"v", "t1", Weight(1), 3}, {"v", "t2", Weight(5), 1}});
    // Four edge copies exceed c = 1, every copy is light, one slot holds all.
    SamplingParams tight = make_sampling_params(Weight(10), 2, 3);
    StarSketch one = sparsify_star(g, tight);
    CHECK_FALSE(one.verbatim);
    CHECK(one.heavy_edges.empty());
    REQUIRE(one.sampled_slots.size() == 1);
    CHECK(one.sampled_slots[0].second == Weight(8));
    CHECK(one.total == Weight(8));

    // With c = 5 the same star fits verbatim as four expanded copies.
    SamplingParams roomy = make_sampling_params(make_weight(9, 2), 2, 3);
    StarSketch all = sparsify_star(g, roomy);
    CHECK(all.verbatim);
    CHECK(all.heavy_edges.size() == 4);
  }

  SECTION("deterministic per seed, fresh draws per salt") {
    Instance g = oracle::star({{"t1", Weight(5)},
                               {"t2", Weight(1)},
                               {"t3", Weight(1)},
                               {"t4", Weight(1)},
                               {"t5", Weight(1)},
                               {"t6", Weight(1)}});
    SamplingParams p = make_sampling_params(make_weight(9, 2), 6, 77);
    auto slots = [&](uint64_t salt) { return sparsify_star(g, p, salt).sampled_slots; };
    CHECK(slots(0) == slots(0));
    bool salt_changes = false;
    for (uint64_t salt = 1; salt <= 8 && !salt_changes; ++salt)
      salt_changes = slots(salt) != slots(0);
    CHECK(salt_changes);

    SamplingParams q = make_sampling_params(make_weight(9, 2), 6, 78);
    bool seed_changes = sparsify_star(g, q).sampled_slots != slots(0);
    for (uint64_t salt = 1; salt <= 8 && !seed_changes; ++salt)
      seed_changes = sparsify_star(g, q, salt).sampled_slots != slots(salt);
    CHECK(seed_changes);
  }

  SECTION("rejects non-stars") {
    Instance two_centers =
        make_instance({"v", "u", "t1"}, {"t1"},
                      {{"v", "t1", Weight(1)}, {"u", "t1", Weight(1)}});
    SamplingParams p = make_sampling_params(Weight(1), 1, 0);
    CHECK_THROWS_AS(sparsify_star(two_centers, p), input_error);

    Instance no_center = make_instance({"t1", "t2"}, {"t1", "t2"}, {{"t1", "t2", Weight(1)}});
    CHECK_THROWS_AS(sparsify_star(no_center, p), input_error);

    Instance stray = make_instance({"v", "t1", "t2"}, {"t1", "t2"},
                                   {{"v", "t1", Weight(1)}, {"t1", "t2", Weight(1)}});
    CHECK_THROWS_AS(sparsify_star(stray, p), input_error);
  }
}

TEST_CASE("star sampler") {
  SECTION("matches the sketching draws exactly") {
    // Rebuilding the sampler and seed stream must reproduce sparsify_star
    // slot for slot; the fast Monte-Carlo paths rely on this equivalence.
    std::vector<std::pair<std::string, Weight>> arms = {{"t1", Weight(40)}};
    for (int i = 2; i <= 30; ++i)
      arms.emplace_back("t" + std::to_string(i), make_weight(i, 7));
    Instance g = oracle::star(arms);
    SamplingParams p = make_sampling_params(Weight(4), 30, 2024);
    REQUIRE(p.c == 7);

    Weight total = 0;
    for (const auto& [t, w] : arms) total += w;
    std::vector<std::string> light_term;
    std::vector<Weight> light_weight;
    Weight heavy_total = 0;
    for (const auto& [t, w] : arms) {
      if (w * p.c >= total) {
        heavy_total += w;
      } else {
        light_term.push_back(t);
        light_weight.push_back(w);
      }
    }
    StarSampler sampler(light_term, light_weight);
    const long h = static_cast<long>(arms.size() - light_term.size());
    const Weight slot = (total - heavy_total) / (p.c - h);

    for (uint64_t salt = 0; salt < 4; ++salt) {
      Rng rng(derive_seed(derive_seed(p.seed, "v"), salt));
      std::map<size_t, long> hits;
      for (long d = 0; d < p.c - h; ++d) ++hits[sampler.draw(rng)];
      std::vector<std::pair<std::string, Weight>> expect;
      for (const auto& [idx, count] : hits)
        expect.emplace_back(light_term[idx], slot * count);
      CHECK(sparsify_star(g, p, salt).sampled_slots == expect);
    }
  }

  SECTION("draw frequencies track the weights") {
    StarSampler lopsided({"x", "y"}, {Weight(1), Weight(3)});
    Rng rng(7);
    long heavy_side = 0;
    const long n = 20000;
    for (long i = 0; i < n; ++i)
      if (lopsided.draw(rng) == 1) ++heavy_side;
    CHECK(make_weight(heavy_side, n) > make_weight(73, 100));
    CHECK(make_weight(heavy_side, n) < make_weight(77, 100));

    StarSampler even({"a", "b", "c", "d"},
                     {Weight(1), Weight(1), Weight(1), Weight(1)});
    Rng rng2(11);
    std::vector<long> count(4, 0);
    for (long i = 0; i < 8000; ++i) ++count[even.draw(rng2)];
    for (long c : count) {
      CHECK(c > 1800);
      CHECK(c < 2200);
    }
  }
}

TEST_CASE("sketch side decisions") {
  SamplingParams p = make_sampling_params(Weight(1), 2, 0);

  SECTION("strict majority lands on side A") {
    StarSketch single = sparsify_star(oracle::star({{"t1", Weight(1)}}), p);
    CHECK(sketch_side(single, {"t1"}) == 'A');
    CHECK(sketch_side(single, {"t9"}) == 'B');  // disjoint subset sees zero weight
    CHECK(sketch_side(single, {}) == 'B');
  }

  SECTION("exact ties fall to side B") {
    StarSketch even = sparsify_star(oracle::star({{"t1", Weight(1)}, {"t2", Weight(1)}}), p);
    CHECK(sketch_side(even, {"t1"}) == 'B');
    CHECK(sketch_side(even, {"t2"}) == 'B');
    CHECK(sketch_side(even, {"t1", "t2"}) == 'A');
  }

  SECTION("sampled sketches decide by sketched weight") {
    Instance g = oracle::star({{"t1", Weight(5)},
                               {"t2", Weight(1)},
                               {"t3", Weight(1)},
                               {"t4", Weight(1)},
                               {"t5", Weight(1)},
                               {"t6", Weight(1)}});
    SamplingParams q = make_sampling_params(make_weight(9, 2), 6, 77);
    StarSketch sk = sparsify_star(g, q);
    // t1 alone carries half the star; any sampled slot on top tips it to A.
    Weight in = Weight(5);
    for (const auto& [t, w] : sk.sampled_slots)
      if (t == "t1") in += w;
    CHECK(sketch_side(sk, {"t1"}) == (2 * in > sk.total ? 'A' : 'B'));
  }
}

TEST_CASE("sketch keys group equivalent stars") {
  SamplingParams p = make_sampling_params(Weight(1), 2, 0);
  auto key_of = [&](const Instance& g) { return sketch_key(sparsify_star(g, p)); };

  SECTION("scaling preserves every side decision and the key") {
    Instance a = oracle::star({{"t1", Weight(1)}, {"t2", Weight(2)}});
    Instance b = oracle::star({{"t1", Weight(2)}, {"t2", Weight(4)}});
    CHECK(key_of(a) == key_of(b));

    StarSketch ska = sparsify_star(a, p), skb = sparsify_star(b, p);
    const std::vector<std::set<std::string>> subsets = {
        {}, {"t1"}, {"t2"}, {"t1", "t2"}};
    for (const auto& s : subsets) CHECK(sketch_side(ska, s) == sketch_side(skb, s));
  }

  SECTION("swapped weights change a decision and the key") {
    Instance a = oracle::star({{"t1", Weight(1)}, {"t2", Weight(2)}});
    Instance c = oracle::star({{"t1", Weight(2)}, {"t2", Weight(1)}});
    CHECK(sketch_side(sparsify_star(a, p), {"t2"}) == 'A');
    CHECK(sketch_side(sparsify_star(c, p), {"t2"}) == 'B');
    CHECK(key_of(a) != key_of(c));
  }

  SECTION("different leaf sets never collide") {
    Instance a = oracle::star({{"t1", Weight(1)}, {"t2", Weight(2)}});
    Instance d = oracle::star({{"t1", Weight(1)}, {"t3", Weight(2)}});
    CHECK(key_of(a) != key_of(d));
  }

  SECTION("wide stars fall back to the exact weight profile") {
    std::vector<std::pair<std::string, Weight>> arms;
    for (int i = 1; i <= 21; ++i)
      arms.emplace_back("t" + std::to_string(i), Weight(i));
    std::string wide = key_of(oracle::star(arms));
    CHECK(wide.find("|W:") != std::string::npos);

    arms[0].second = Weight(50);
    CHECK(key_of(oracle::star(arms)) != wide);

    std::string narrow = key_of(oracle::star(
        {{"t1", Weight(1)}, {"t2", Weight(2)}}));
    CHECK(narrow.find("|W:") == std::string::npos);
  }
}

TEST_CASE("sketched mass is unbiased per subset") {
  // Monte-Carlo check of the expectation identity: over many independent
  // sketches the mean of w'_S must sit within 4 sample standard errors of
  // w_S. All moments are exact rationals, so the comparison is exact.
  Instance g = oracle::star({{"t1", Weight(5)},
                             {"t2", Weight(1)},
                             {"t3", Weight(1)},
                             {"t4", Weight(1)},
                             {"t5", Weight(1)},
                             {"t6", Weight(1)}});
  SamplingParams p = make_sampling_params(make_weight(9, 2), 6, 42);
  const std::set<std::string> s = {"t2", "t3"};
  const Weight w_s = Weight(2);

  const long n = 10000;
  Weight sum = 0, sumsq = 0;
  for (long i = 0; i < n; ++i) {
    StarSketch sk = sparsify_star(g, p, static_cast<uint64_t>(i));
    Weight in = 0;
    for (const auto& [t, w] : sk.heavy_edges)
      if (s.count(t)) in += w;
    for (const auto& [t, w] : sk.sampled_slots)
      if (s.count(t)) in += w;
    sum += in;
    sumsq += in * in;
  }
  const Weight mean = sum / n;
  const Weight var = (sumsq - n * mean * mean) / (n - 1);
  const Weight dev = mean - w_s;
  CHECK(dev * dev * n <= 16 * var);
  CHECK(var > 0);  // the estimator really is random here
}

TEST_CASE("special cuts") {
  SECTION("pairwise cuts deduplicate as partitions") {
    Instance g = oracle::star({{"t1", Weight(1)}, {"t2", Weight(2)}, {"t3", Weight(3)}});
    std::vector<Bipartition> cuts = special_cuts(g);
    REQUIRE(cuts.size() == 2);
    CHECK(cuts[0].side_a == std::vector<std::string>{"t1"});
    CHECK(cuts[0].side_b == std::vector<std::string>{"t2", "t3"});
    CHECK(cuts[1].side_a == std::vector<std::string>{"t1", "t3"});
    CHECK(cuts[1].side_b == std::vector<std::string>{"t2"});
  }

  SECTION("two terminals give exactly one cut") {
    Instance g = make_instance({"t1", "v", "t2"}, {"t1", "t2"},
                               {{"t1", "v", Weight(3)}, {"v", "t2", Weight(4)}});
    std::vector<Bipartition> cuts = special_cuts(g);
    REQUIRE(cuts.size() == 1);
    CHECK(cuts[0].side_a == std::vector<std::string>{"t1"});
  }

  SECTION("disconnected terminals split by component at value zero") {
    Instance g = make_instance({"t1", "t2"}, {"t1", "t2"}, {});
    auto cuts = detail::special_cuts_with_values(g);
    REQUIRE(cuts.size() == 1);
    CHECK(cuts[0].value == Weight(0));
    CHECK(mask_to_bipartition(g, cuts[0].mask).side_a == std::vector<std::string>{"t1"});
  }

  SECTION("values match the bipartition min-cuts") {
    Instance g = gen_random_quasi(4, 11, 31);
    for (const auto& sc : detail::special_cuts_with_values(g))
      CHECK(sc.value == oracle::brute_min_cut(g, sc.mask));
  }
}

TEST_CASE("cut contributions") {
  Instance g = oracle::star({{"t1", Weight(1)}, {"t2", Weight(2)}, {"t3", Weight(3)}});
  CHECK(cut_contribution(g, "v", {"t1"}) == Weight(1));
  CHECK(cut_contribution(g, "v", {"t1", "t3"}) == Weight(2));  // min(4, 2)
  CHECK(cut_contribution(g, "v", {}) == Weight(0));
  CHECK_THROWS_AS(cut_contribution(g, "t1", {"t1"}), input_error);

  Instance path = make_instance({"t1", "v", "t2"}, {"t1", "t2"},
                                {{"t1", "v", Weight(3)}, {"v", "t2", Weight(4)}});
  CHECK(cut_contribution(path, "v", {"t1"}) == Weight(3));

  Instance lonely = make_instance({"v", "t1", "t2"}, {"t1", "t2"},
                                  {{"t1", "t2", Weight(1)}});
  CHECK(cut_contribution(lonely, "v", {"t1"}) == Weight(0));
}

TEST_CASE("important vertices") {
  SECTION("a bridge vertex carrying the whole cut is important") {
    Instance g = make_instance({"t1", "v", "t2"}, {"t1", "t2"},
                               {{"t1", "v", Weight(3)}, {"v", "t2", Weight(4)}});
    SamplingParams p = make_sampling_params(Weight(1), 2, 0);
    CHECK(p.eta == make_weight(1, 2000));
    CHECK(important_vertices(g, p) == std::vector<std::string>{"v"});
  }

  SECTION("single-edge vertices never matter") {
    Instance g = make_instance(
        {"t1", "t2", "v"}, {"t1", "t2"},
        {{"t1", "t2", Weight(1)}, {"v", "t1", Weight(5)}});
    SamplingParams p = make_sampling_params(Weight(1), 2, 0);
    CHECK(important_vertices(g, p).empty());
  }

  SECTION("stars tiny against every cut are skipped") {
    // Terminal triangle of weight 100 keeps every special cut near 200 while
    // both stars contribute at most 3/1000, far under eta/k of any cut.
    Instance g = make_instance(
        {"t1", "t2", "t3", "v1", "v2"}, {"t1", "t2", "t3"},
        {{"t1", "t2", Weight(100)}, {"t2", "t3", Weight(100)}, {"t1", "t3", Weight(100)},
         {"v1", "t1", make_weight(1, 1000)}, {"v1", "t2", make_weight(2, 1000)},
         {"v1", "t3", make_weight(3, 1000)},
         {"v2", "t1", make_weight(1, 1000)}, {"v2", "t2", make_weight(2, 1000)},
         {"v2", "t3", make_weight(3, 1000)}});
    SamplingParams p = make_sampling_params(Weight(1), 3, 0);
    CHECK(important_vertices(g, p).empty());
  }

  SECTION("connectivity through a star beats a zero component cut") {
    // t3 is isolated, so two special cuts have value zero; v still earns its
    // importance from the positive t1|t2 cut it fully carries.
    Instance g = make_instance({"t1", "t2", "t3", "v"}, {"t1", "t2", "t3"},
                               {{"v", "t1", Weight(1)}, {"v", "t2", Weight(1)}});
    SamplingParams p = make_sampling_params(Weight(1), 3, 0);
    CHECK(important_vertices(g, p) == std::vector<std::string>{"v"});
  }

  SECTION("count stays under the coarse ceiling") {
    for (uint64_t seed : {1, 2, 3}) {
      Instance g = gen_random_quasi(5, 14, seed);
      SamplingParams p = make_sampling_params(Weight(1), g.k(), seed);
      const size_t count = important_vertices(g, p).size();
      // k * k / eta with eta = 1/5000 is astronomically loose; the sharp
      // check is count <= number of non-terminals.
      CHECK(count <= static_cast<size_t>(g.n() - g.k()));
      CHECK(Weight(static_cast<long>(count)) * p.eta <= Weight(g.k()) * Weight(g.k()));
    }
  }

  SECTION("rejects general graphs") {
    Instance chain = make_instance({"t1", "a", "b", "t2"}, {"t1", "t2"},
                                   {{"t1", "a", Weight(1)}, {"a", "b", Weight(1)},
                                    {"b", "t2", Weight(1)}});
    CHECK_THROWS_AS(important_vertices(chain, make_sampling_params(Weight(1), 2, 0)),
                    input_error);
  }
}

TEST_CASE("approximate sparsifier") {
  SECTION("all-important instances pass through unchanged") {
    Instance g = make_instance({"t1", "v", "t2"}, {"t1", "t2"},
                               {{"t1", "v", Weight(3)}, {"v", "t2", Weight(4)}});
    ApproxResult r = approx_sparsifier(g, make_sampling_params(Weight(1), 2, 0));
    CHECK(r.important_count == 1);
    CHECK(r.group_count == 0);
    CHECK(r.h.n() == 3);
    CHECK(r.h.m() == 2);
    QualityReport q = verify_quality(g, r.h);
    CHECK(q.exhaustive);
    CHECK(q.quality == Weight(1));
  }

  SECTION("identical unimportant stars contract to one vertex at quality 1") {
    Instance g = make_instance(
        {"t1", "t2", "t3", "v1", "v2"}, {"t1", "t2", "t3"},
        {{"t1", "t2", Weight(100)}, {"t2", "t3", Weight(100)}, {"t1", "t3", Weight(100)},
         {"v1", "t1", make_weight(1, 1000)}, {"v1", "t2", make_weight(2, 1000)},
         {"v1", "t3", make_weight(3, 1000)},
         {"v2", "t1", make_weight(1, 1000)}, {"v2", "t2", make_weight(2, 1000)},
         {"v2", "t3", make_weight(3, 1000)}});
    SamplingParams p = make_sampling_params(Weight(1), 3, 0);
    ApproxResult r = approx_sparsifier(g, p);
    CHECK(r.important_count == 0);
    CHECK(r.group_count == 1);
    CHECK(r.h.n() == 4);
    CHECK(total_weight(r.h) == total_weight(g));  // merged stars share no edge
    QualityReport q = verify_quality(g, r.h);
    CHECK(q.exhaustive);
    CHECK(q.quality == Weight(1));
    CHECK(verify_contraction(g, r.h, r.contraction).matches);
  }

  SECTION("rejects general graphs") {
    Instance chain = make_instance({"t1", "a", "b", "t2"}, {"t1", "t2"},
                                   {{"t1", "a", Weight(1)}, {"a", "b", Weight(1)},
                                    {"b", "t2", Weight(1)}});
    CHECK_THROWS_AS(approx_sparsifier(chain, make_sampling_params(Weight(1), 2, 0)),
                    input_error);
  }

  SECTION("random instances reach the target quality within a few seeds") {
    Instance g = gen_random_quasi(6, 20, 12);
    const Weight target = Weight(4);  // 1 + 3 epsilon at epsilon = 1
    bool hit = false;
    for (uint64_t attempt = 0; attempt < 5 && !hit; ++attempt) {
      ApproxResult r = approx_sparsifier(g, make_sampling_params(Weight(1), 6, 100 + attempt));
      QualityReport q = verify_quality(g, r.h);
      REQUIRE(q.exhaustive);
      if (!q.infinite && q.quality <= target) hit = true;
    }
    CHECK(hit);
  }

  SECTION("refining the grouping never hurts the quality") {
    // epsilon = 10 collapses every sketch to one slot, forcing aggressive
    // merging; splitting a member off any merged class must verify at the
    // same quality or better.
    int cases = 0;
    for (uint64_t seed = 1; seed <= 6; ++seed) {
      Instance g = gen_random_quasi(5, 14, seed);
      ApproxResult r = approx_sparsifier(g, make_sampling_params(Weight(10), 5, seed));
      auto split = r.contraction.classes;
      size_t big = split.size();
      for (size_t i = 0; i < split.size(); ++i)
        if (split[i].size() > 1) big = i;
      if (big == split.size()) continue;
      std::vector<std::string> peeled = {split[big].back()};
      split[big].pop_back();
      split.push_back(peeled);

      Instance refined = contract(g, make_contraction(g, split));
      QualityReport coarse = verify_quality(g, r.h);
      QualityReport fine = verify_quality(g, refined);
      REQUIRE_FALSE(coarse.infinite);
      REQUIRE_FALSE(fine.infinite);
      CHECK(fine.quality <= coarse.quality);
      ++cases;
    }
    CHECK(cases >= 3);
  }
}
