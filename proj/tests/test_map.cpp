#include <doctest.h>

#include <set>
#include <vector>

#include "oracles.hpp"
#include "shred/causal_map.hpp"
#include "shred/errors.hpp"
#include "shred/metrics.hpp"

using namespace shred;
using Steps = std::vector<std::int64_t>;

namespace {

std::set<std::pair<std::int64_t, std::int64_t>> walk_edges(const CausalMap& m) {
  std::set<std::pair<std::int64_t, std::int64_t>> out;
  for (const auto& [u, v] : m.graph().edges()) {
    const auto a = m.walk_index(u), b = m.walk_index(v);
    out.insert({std::min(a, b), std::max(a, b)});
  }
  return out;
}

}  // namespace

TEST_CASE("path-graph example") {
  const DiscreteExcursion e(Steps{1, 0, -1, -1});
  const auto m = build_map(e);
  CHECK(m.vertex_count() == 3);
  CHECK(m.graph().edge_count() == 2);
  const auto d = bfs_distance(m, m.root_up());
  CHECK(d[static_cast<std::size_t>(m.root_down())] == 2);
}

TEST_CASE("flat walk is a single edge") {
  const DiscreteExcursion e(Steps{0, 0, 0, -1});
  const auto m = build_map(e);
  CHECK(m.vertex_count() == 2);
  CHECK(m.graph().edge_count() == 1);
  CHECK(m.walk_index(m.root_up()) == 3);
}

TEST_CASE("builder matches the flood-fill face oracle, exhaustive n <= 7") {
  for (std::int64_t n = 1; n <= 7; ++n) {
    for (const auto& s : oracle::all_excursions(n)) {
      const DiscreteExcursion e(s);
      const auto fm = oracle::flood_map(e);
      CHECK(fm.one_code_per_face);
      const auto m = build_map(e);
      CHECK(m.vertex_count() == fm.coded + 1);
      CHECK(walk_edges(m) == fm.edges);
    }
  }
}

TEST_CASE("map invariants, distances to the bottom pole, pole distance") {
  for (std::int64_t n = 1; n <= 8; ++n) {
    for (const auto& s : oracle::all_excursions(n)) {
      const DiscreteExcursion e(s);
      const auto m = build_map(e);
      const auto& g = m.graph();
      const auto d = bfs_distance(m, m.root_up());
      for (std::int32_t v = 0; v < m.vertex_count(); ++v) {
        REQUIRE(d[static_cast<std::size_t>(v)] >= 0);
        bool below = false, above = false;
        for (auto w : g.neighbors(v)) {
          CHECK(std::abs(m.level(w) - m.level(v)) == 1);
          below |= m.level(w) < m.level(v);
          above |= m.level(w) > m.level(v);
        }
        if (v != m.root_up()) CHECK(below);
        if (v != m.root_down()) CHECK(above);
        if (v != m.root_down()) {
          // Graph distance to the bottom pole is E_bar + 1/2 = E(k).
          CHECK(d[static_cast<std::size_t>(v)] == e.height(m.walk_index(v)));
        }
      }
      CHECK(d[static_cast<std::size_t>(m.root_down())] == e.max_height() + 1);
    }
  }
}

TEST_CASE("trees: spanning, subgraphs, and equal to the distance formulas (n <= 8)") {
  std::size_t pairs = 0;
  for (std::int64_t n = 1; n <= 8; ++n) {
    for (const auto& s : oracle::all_excursions(n)) {
      const DiscreteExcursion e(s);
      const auto m = build_map(e);
      const auto t = build_trees(m);
      const auto up = t.up_graph(), down = t.down_graph();
      CHECK(up.edge_count() == static_cast<std::size_t>(m.vertex_count() - 1));
      CHECK(down.edge_count() == static_cast<std::size_t>(m.vertex_count() - 1));
      for (const auto& [a, b] : up.edges()) CHECK(m.graph().has_edge(a, b));
      for (const auto& [a, b] : down.edges()) CHECK(m.graph().has_edge(a, b));
      // Opposite poles are leaves.
      CHECK(up.neighbors(m.root_down()).size() == 1);
      CHECK(down.neighbors(m.root_up()).size() == 1);
      const DiscreteTreeMetrics tm(e);
      const std::int32_t coded = m.vertex_count() - 1;
      for (std::int32_t a = 0; a < coded; ++a) {
        const auto du = bfs(up, a), dd = bfs(down, a);
        for (std::int32_t b = 0; b < coded; ++b) {
          CHECK(du[static_cast<std::size_t>(b)] == tm.d_up(m.walk_index(a), m.walk_index(b)));
          CHECK(dd[static_cast<std::size_t>(b)] == tm.d_down(m.walk_index(a), m.walk_index(b)));
          ++pairs;
        }
      }
    }
  }
  CHECK(pairs > 10000);
}

TEST_CASE("sampled maps never raise and satisfy the tree sandwich") {
  const StepLaw law = build_step_law(1.5);
  Rng rng(17);
  for (int i = 0; i < 200; ++i) {
    const auto e = sample_excursion(law, 2000, rng);
    const auto m = build_map(e);
    const auto t = build_trees(m);
    const DiscreteTreeMetrics tm(e);
    Rng pick(i, 0, StreamTag::kPairs);
    const std::int32_t coded = m.vertex_count() - 1;
    const auto src = static_cast<std::int32_t>(pick.below(static_cast<std::uint64_t>(coded)));
    const auto d = bfs_distance(m, src);
    const auto ds = bfs(t.union_graph(), src);
    for (std::int32_t v = 0; v < coded; v += 7) {
      const auto dv = d[static_cast<std::size_t>(v)];
      const auto sv = ds[static_cast<std::size_t>(v)];
      CHECK(dv <= sv);
      CHECK(sv <= tm.d_up(m.walk_index(src), m.walk_index(v)));
      CHECK(sv <= tm.d_down(m.walk_index(src), m.walk_index(v)));
    }
  }
}

TEST_CASE("geodesics reconstructed from BFS parents have variation equal to D") {
  const StepLaw law = build_step_law(1.5);
  Rng rng(21);
  const auto e = sample_excursion(law, 3000, rng);
  const auto m = build_map(e);
  const auto [dist, parent] = bfs_with_parents(m.graph(), 0);
  for (std::int32_t v = 0; v < m.vertex_count(); v += 13) {
    double var = 0.0;
    for (std::int32_t u = v; parent[static_cast<std::size_t>(u)] >= 0; u = parent[static_cast<std::size_t>(u)]) {
      var += std::abs(m.y(u) - m.y(parent[static_cast<std::size_t>(u)]));
    }
    CHECK(var == dist[static_cast<std::size_t>(v)]);
  }
}
