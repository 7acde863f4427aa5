#include <doctest.h>

#include <sstream>
#include <vector>

#include "oracles.hpp"
#include "shred/codec.hpp"
#include "shred/errors.hpp"

using namespace shred;
using Steps = std::vector<std::int64_t>;

TEST_CASE("multimers of small walks") {
  const auto m0 = walk_to_multimers(DiscreteExcursion(Steps{0, 0, 0, -1}));
  REQUIRE(m0.multimers.size() == 3);
  for (int i = 0; i < 3; ++i) {
    CHECK(m0.multimers[i] == Multimer{i + 1, 0, 0});
  }
  const auto m1 = walk_to_multimers(DiscreteExcursion(Steps{1, 0, -1, -1}));
  CHECK(m1.multimers == std::vector<Multimer>{{1, 0, 1}, {2, 1, 0}});
  CHECK(m1.vertex_count() == 3);
  CHECK(multimers_to_walk(walk_to_multimers(DiscreteExcursion(Steps{0, -1}))).steps() ==
        Steps{0, -1});
}

TEST_CASE("bijection, exhaustive for n <= 5") {
  for (std::int64_t n = 1; n <= 5; ++n) {
    for (const auto& s : oracle::all_excursions(n)) {
      const DiscreteExcursion e(s);
      const auto m = walk_to_multimers(e);
      CHECK(m.vertex_count() == n);
      CHECK(multimers_to_walk(m) == e);
    }
  }
}

TEST_CASE("bijection on large sampled walks, through CSV") {
  const StepLaw law = build_step_law(1.5);
  Rng rng(4);
  for (int i = 0; i < 100; ++i) {
    const auto e = sample_excursion(law, 10000, rng);
    const auto m = walk_to_multimers(e);
    CHECK(m.vertex_count() == 10000);
    std::stringstream ss;
    write_multimers_csv(ss, m);
    CHECK(multimers_to_walk(read_multimers_csv(ss)) == e);
  }
}

TEST_CASE("malformed configurations") {
  MultimerConfig m;
  m.root = 4;
  m.multimers = {{1, 0, 1}, {2, 0, 0}};  // bottom should be 1
  CHECK_THROWS_AS(multimers_to_walk(m), MalformedConfig);
  m.multimers = {{2, 0, 0}, {1, 0, 0}};
  CHECK_THROWS_AS(multimers_to_walk(m), MalformedConfig);
  m.multimers = {{1, 0, 5}};
  CHECK_THROWS_AS(multimers_to_walk(m), MalformedConfig);
  m.multimers = {{7, 0, 0}};
  CHECK_THROWS_AS(multimers_to_walk(m), MalformedConfig);
  std::stringstream bad("column,bottom,length\n1,0,0\n");
  CHECK_THROWS_AS(read_multimers_csv(bad), MalformedConfig);
}

TEST_CASE("slits") {
  const auto s0 = slits_of(DiscreteExcursion(Steps{0, 0, 0, -1}));
  CHECK(s0.slits.size() == 3);
  CHECK(s0.blocking_count() == 0);
  CHECK(s0.circumference == 4.0);
  const auto s1 = slits_of(DiscreteExcursion(Steps{2, -1, -1, -1}));
  REQUIRE(s1.slits.size() == 1);
  CHECK(s1.slits[0].x == 1.0);
  CHECK(s1.slits[0].bottom == 0.0);
  CHECK(s1.slits[0].top == 2.0);

  const StepLaw law = build_step_law(1.5);
  Rng rng(6);
  const auto e = sample_excursion(law, 3000, rng);
  const auto d = slits_of(e);
  const auto r = slits_of(rescale(e, 1.5));
  REQUIRE(d.slits.size() == r.slits.size());
  const double sc = std::pow(3000.0, -1.0 / 1.5);
  double up = 0.0;
  std::int64_t downs = 0, nonneg = 0;
  for (auto s : e.steps()) {
    downs += s == -1;
    nonneg += s >= 0;
  }
  for (std::size_t i = 0; i < d.slits.size(); ++i) {
    CHECK(r.slits[i].bottom == doctest::Approx(sc * d.slits[i].bottom));
    CHECK(r.slits[i].top == doctest::Approx(sc * d.slits[i].top));
    CHECK(r.slits[i].x == doctest::Approx(d.slits[i].x / 3000.0));
    up += d.slits[i].top - d.slits[i].bottom;
  }
  CHECK(static_cast<std::int64_t>(d.slits.size()) == nonneg);
  CHECK(up == static_cast<double>(downs - 1));
}
