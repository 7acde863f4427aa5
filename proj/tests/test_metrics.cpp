#include <doctest.h>

#include <algorithm>
#include <limits>
#include <vector>

#include "oracles.hpp"
#include "shred/causal_map.hpp"
#include "shred/errors.hpp"
#include "shred/explore.hpp"
#include "shred/metrics.hpp"

using namespace shred;

namespace {

HeightProfile grid_profile(const std::vector<double>& h, ProfileMode mode) {
  std::vector<double> t(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) t[i] = static_cast<double>(i) / static_cast<double>(h.size() - 1);
  return HeightProfile(t, h, mode);
}

std::vector<std::size_t> all_points(const HeightProfile& p) {
  std::vector<std::size_t> pts(p.size());
  for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = i;
  return pts;
}

std::vector<std::vector<double>> fw_of(const HeightProfile& p) {
  const std::size_t n = p.size();
  std::vector<std::vector<double>> d(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      d[i][j] = i == j ? 0.0 : std::min(p.d_up(std::min(i, j), std::max(i, j)),
                                        p.d_down(std::min(i, j), std::max(i, j)));
  return oracle::floyd_warshall(d);
}

std::vector<double> random_heights(Rng& rng, std::size_t n, bool excursion) {
  std::vector<double> h(n);
  for (auto& x : h) x = std::floor(rng.uniform() * 8.0);
  if (excursion) h.front() = h.back() = 0.0;
  return h;
}

}  // namespace

TEST_CASE("range extrema") {
  Rng rng(1);
  std::vector<std::int64_t> v(300);
  for (auto& x : v) x = static_cast<std::int64_t>(rng.below(1000));
  const RangeExtrema<std::int64_t> r(v);
  for (int k = 0; k < 500; ++k) {
    auto i = rng.below(300), j = rng.below(300);
    if (i > j) std::swap(i, j);
    CHECK(r.min(i, j) == *std::min_element(v.begin() + i, v.begin() + j + 1));
    CHECK(r.max(i, j) == *std::max_element(v.begin() + i, v.begin() + j + 1));
  }
}

TEST_CASE("profile example") {
  const auto p = grid_profile({0, 4, 1, 3, 0}, ProfileMode::kCyclic);
  CHECK(p.d_up(1, 3) == 5.0);
  CHECK(p.d_down(1, 3) == 1.0);
  const auto g = glue(p, all_points(p));
  CHECK(g.at(1, 3) <= 1.0);
  const auto fw = fw_of(p);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) CHECK(g.at(i, j) == fw[i][j]);
  const auto line = grid_profile({0, 4, 1, 3, 0}, ProfileMode::kLine);
  CHECK(line.d_down(1, 3) == 1.0);
  CHECK(line.d_down(0, 4) == 8.0);
  CHECK(p.d_down(0, 4) == 0.0);
}

TEST_CASE("glue equals Floyd-Warshall; witnesses realize the distance") {
  Rng rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    const bool cyc = trial % 2 == 0;
    const auto p = grid_profile(random_heights(rng, 2 + rng.below(30), cyc),
                                cyc ? ProfileMode::kCyclic : ProfileMode::kLine);
    const auto g = glue(p, all_points(p));
    const auto fw = fw_of(p);
    for (std::size_t i = 0; i < p.size(); ++i) {
      for (std::size_t j = 0; j < p.size(); ++j) {
        CHECK(g.at(i, j) == doctest::Approx(fw[i][j]));
        CHECK(g.at(i, j) <= std::min(p.d_up(std::min(i, j), std::max(i, j)),
                                     p.d_down(std::min(i, j), std::max(i, j))));
        const auto chain = g.witness(p, i, j);
        REQUIRE(!chain.empty());
        CHECK(chain.front().point == i);
        CHECK(chain.back().point == j);
        CHECK(chain_length(p, chain) == doctest::Approx(g.at(i, j)));
      }
    }
  }
}

TEST_CASE("glued metric is a pseudo-metric") {
  Rng rng(3);
  const auto p = grid_profile(random_heights(rng, 60, true), ProfileMode::kCyclic);
  const auto g = glue(p, all_points(p));
  for (std::size_t i = 0; i < p.size(); ++i) {
    CHECK(g.at(i, i) == 0.0);
    for (std::size_t j = 0; j < p.size(); ++j) {
      CHECK(g.at(i, j) == g.at(j, i));
      for (std::size_t k = 0; k < p.size(); k += 5) CHECK(g.at(i, j) <= g.at(i, k) + g.at(k, j) + 1e-12);
    }
  }
}

TEST_CASE("point budget") {
  const auto p = grid_profile(std::vector<double>(50, 0.0), ProfileMode::kLine);
  CHECK_THROWS_AS(glue(p, all_points(p), 10), PointBudgetExceeded);
}

TEST_CASE("single-source tree Dijkstra equals glue") {
  Rng rng(4);
  for (int trial = 0; trial < 300; ++trial) {
    const bool cyc = trial % 2 == 0;
    std::vector<double> h(2 + rng.below(40));
    for (auto& x : h) x = rng.uniform() * 5.0;
    if (trial % 3 == 0)
      for (auto& x : h) x = std::floor(x);
    if (cyc) h.front() = h.back() = 0.0;
    const auto p = grid_profile(h, cyc ? ProfileMode::kCyclic : ProfileMode::kLine);
    const auto g = glue(p, all_points(p));
    const std::size_t src = rng.below(p.size());
    const auto d = dstar_from(p, src);
    for (std::size_t j = 0; j < p.size(); ++j) CHECK(d[j] == doctest::Approx(g.at(src, j)).epsilon(1e-12));
  }
}

TEST_CASE("Cartesian trees realize the tree metrics") {
  Rng rng(5);
  std::vector<double> h(40);
  for (auto& x : h) x = std::floor(rng.uniform() * 6.0);
  const auto p = grid_profile(h, ProfileMode::kLine);
  for (double sign : {1.0, -1.0}) {
    const auto t = cartesian_tree(h, sign);
    std::int64_t roots = 0;
    for (auto q : t.parent) roots += q < 0;
    CHECK(roots == 1);
    // Tree distance by lifting to the root.
    auto depth = [&](std::size_t v) {
      std::vector<std::pair<std::size_t, double>> up;
      double acc = 0;
      for (auto u = static_cast<std::int64_t>(v); u >= 0; u = t.parent[static_cast<std::size_t>(u)]) {
        up.push_back({static_cast<std::size_t>(u), acc});
        if (t.parent[static_cast<std::size_t>(u)] >= 0) acc += t.weight[static_cast<std::size_t>(u)];
      }
      return up;
    };
    for (std::size_t i = 0; i < h.size(); ++i) {
      const auto ai = depth(i);
      for (std::size_t j = i; j < h.size(); ++j) {
        const auto aj = depth(j);
        double best = std::numeric_limits<double>::infinity();
        for (const auto& [u, du] : ai)
          for (const auto& [w, dw] : aj)
            if (u == w) best = std::min(best, du + dw);
        CHECK(best == (sign > 0 ? p.d_up(i, j) : p.d_down(i, j)));
      }
    }
  }
}

TEST_CASE("discrete D* on coded times equals BFS in the union of the trees (n <= 7)") {
  for (std::int64_t n = 1; n <= 7; ++n) {
    for (const auto& s : oracle::all_excursions(n)) {
      const DiscreteExcursion e(s);
      const auto m = build_map(e);
      const auto t = build_trees(m);
      const DiscreteTreeMetrics tm(e);
      const std::int32_t coded = m.vertex_count() - 1;
      std::vector<std::vector<double>> d(static_cast<std::size_t>(coded),
                                         std::vector<double>(static_cast<std::size_t>(coded)));
      for (std::int32_t a = 0; a < coded; ++a)
        for (std::int32_t b = 0; b < coded; ++b)
          d[a][b] = static_cast<double>(std::min(tm.d_up(m.walk_index(a), m.walk_index(b)),
                                                 tm.d_down(m.walk_index(a), m.walk_index(b))));
      const auto fw = oracle::floyd_warshall(d);
      const auto u = t.union_graph();
      for (std::int32_t a = 0; a < coded; ++a) {
        const auto bd = bfs(u, a);
        for (std::int32_t b = 0; b < coded; ++b) CHECK(fw[a][b] == static_cast<double>(bd[b]));
      }
    }
  }
}

TEST_CASE("line-walk D* is unchanged by refining the time grid") {
  const StepLaw law = build_step_law(1.5);
  Rng rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const auto w = sample_line_walk(law, 200, rng);
    const auto p = w.profile();
    // Half-integer samples of the linear-down process: left limits before jumps.
    std::vector<double> t2, h2;
    for (std::int64_t k = 0; k <= w.length(); ++k) {
      t2.push_back(static_cast<double>(k));
      h2.push_back(static_cast<double>(w.x[static_cast<std::size_t>(k)]));
      if (k < w.length()) {
        const auto a = w.x[static_cast<std::size_t>(k)], b = w.x[static_cast<std::size_t>(k + 1)];
        t2.push_back(static_cast<double>(k) + 0.5);
        h2.push_back(b < a ? static_cast<double>(a) - 0.5 : static_cast<double>(a));
      }
    }
    const HeightProfile fine(t2, h2, ProfileMode::kLine);
    const auto coarse = dstar_from(p, 0);
    const auto refined = dstar_from(fine, 0);
    for (std::size_t k = 0; k < coarse.size(); ++k) CHECK(refined[2 * k] <= coarse[k] + 1e-12);
  }
}
