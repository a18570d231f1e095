#pragma once

#include <string>
#include <utility>
#include <vector>

#include "termcut/graph.hpp"
#include "termcut/planar.hpp"
#include "termcut/rng.hpp"

namespace termcut {

// Random quasi-bipartite instance: every edge touches a terminal. Each
// non-terminal joins each terminal with probability 3/4 (at least one edge is
// forced) under multiplicities up to 12, so moderate epsilon values push
// star sampling past its verbatim threshold. Terminal-terminal edges appear
// with probability 1/4.
inline Instance gen_random_quasi(int k, int n, std::uint64_t seed) {
  if (k < 2) throw input_error("need at least two terminals");
  if (n < k) throw input_error("vertex count below terminal count");
  if (n > 100000) throw input_error("vertex count too large");
  Rng rng(derive_seed(seed, "random-quasi"));

  std::vector<std::string> vids, tids;
  for (int i = 1; i <= k; ++i) tids.push_back("t" + std::to_string(i));
  vids = tids;
  for (int i = 1; i <= n - k; ++i) vids.push_back("v" + std::to_string(i));

  auto weight = [&rng]() {
    return make_weight(static_cast<long>(rng.range(1, 1024)), 64);
  };

  std::vector<EdgeSpec> specs;
  for (int i = 1; i <= n - k; ++i) {
    const std::string v = "v" + std::to_string(i);
    bool any = false;
    for (int t = 1; t <= k; ++t)
      if (rng.below(4) < 3) {
        specs.push_back(EdgeSpec{v, tids[t - 1], weight(), static_cast<long>(rng.range(1, 12))});
        any = true;
      }
    if (!any)
      specs.push_back(EdgeSpec{v, tids[rng.below(k)], weight(), static_cast<long>(rng.range(1, 12))});
  }
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      if (rng.below(4) == 0)
        specs.push_back(EdgeSpec{tids[i], tids[j], weight(), static_cast<long>(rng.range(1, 3))});
  return make_instance(vids, tids, specs);
}

// Grid with unit-structure embedding: vertex g{r}_{c}, rotation north, east,
// south, west, outer walk clockwise around the perimeter from g0_0. The k
// terminals sit on the perimeter in walk order.
inline EmbeddedInstance gen_grid_oneface(int rows, int cols, int k, std::uint64_t seed) {
  if (rows < 2 || cols < 2) throw input_error("grid needs at least two rows and columns");
  if (rows > 200 || cols > 200) throw input_error("grid too large");
  const int perimeter = 2 * (rows + cols) - 4;
  if (k < 2 || k > perimeter) throw input_error("terminal count must fit on the perimeter");
  Rng rng(derive_seed(seed, "grid-oneface"));

  auto name = [](int r, int c) { return "g" + std::to_string(r) + "_" + std::to_string(c); };

  std::vector<std::string> vids;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) vids.push_back(name(r, c));

  std::vector<EdgeSpec> specs;
  std::vector<std::vector<int>> east(rows, std::vector<int>(cols, -1));
  std::vector<std::vector<int>> south(rows, std::vector<int>(cols, -1));
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) {
        east[r][c] = static_cast<int>(specs.size());
        specs.push_back(EdgeSpec{name(r, c), name(r, c + 1),
                                 make_weight(static_cast<long>(rng.range(1, 256)), 16), 1});
      }
      if (r + 1 < rows) {
        south[r][c] = static_cast<int>(specs.size());
        specs.push_back(EdgeSpec{name(r, c), name(r + 1, c),
                                 make_weight(static_cast<long>(rng.range(1, 256)), 16), 1});
      }
    }

  // perimeter in clockwise walk order from the corner
  std::vector<std::pair<int, int>> walk;
  for (int c = 0; c < cols; ++c) walk.push_back({0, c});
  for (int r = 1; r < rows; ++r) walk.push_back({r, cols - 1});
  for (int c = cols - 2; c >= 0; --c) walk.push_back({rows - 1, c});
  for (int r = rows - 2; r >= 1; --r) walk.push_back({r, 0});

  std::vector<int> picks(perimeter);
  for (int i = 0; i < perimeter; ++i) picks[i] = i;
  for (int i = 0; i < k; ++i) {
    const int j = i + static_cast<int>(rng.below(perimeter - i));
    std::swap(picks[i], picks[j]);
  }
  picks.resize(k);
  std::sort(picks.begin(), picks.end());
  std::vector<std::string> tids;
  for (int p : picks) tids.push_back(name(walk[p].first, walk[p].second));

  Instance g = make_instance(vids, tids, specs);

  std::vector<std::vector<int>> rot(g.n());
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      auto& list = rot[g.index_of(name(r, c))];
      if (r > 0) list.push_back(2 * south[r - 1][c] + 1);  // north
      if (c + 1 < cols) list.push_back(2 * east[r][c]);    // east
      if (r + 1 < rows) list.push_back(2 * south[r][c]);   // south
      if (c > 0) list.push_back(2 * east[r][c - 1] + 1);   // west
    }
  return make_embedded_darts(std::move(g), std::move(rot), 2 * east[0][0]);
}

}  // namespace termcut
