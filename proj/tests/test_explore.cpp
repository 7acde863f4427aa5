#include <doctest.h>

#include <cmath>
#include <vector>

#include "shred/errors.hpp"
#include "shred/explore.hpp"
#include "shred/stats.hpp"

using namespace shred;

TEST_CASE("hand trace") {
  const auto w = line_walk_from_steps({2, -1, -1, 2, -1, -1, -1, 3, -1});
  const auto tr = explore_word(w, 1.0, "b");
  CHECK(tr.word == "b");
  CHECK(tr.S == std::vector<std::int64_t>{1});
  CHECK(tr.T == std::vector<std::int64_t>{3});
  CHECK(tr.chi == std::vector<double>{0.0});
  const auto hh = explore_word(w, 1.0, "hh");
  // After the first h the walk sits at 2 and never reaches 3.
  CHECK(hh.S == std::vector<std::int64_t>{1});
  CHECK(hh.T == hh.S);
  CHECK(hh.truncated);
  CHECK(hh.chi.empty());
  // Second b: from T=3 (X=0) the next rise to 1 is at 4; the walk then
  // returns to 0 at 6.
  const auto bb = explore_word(w, 1.0, "bb");
  CHECK(bb.S == std::vector<std::int64_t>{1, 4});
  CHECK(bb.T == std::vector<std::int64_t>{3, 6});
  // From T=6 (X=0) the jump at 8 lands on 2; before it the walk sat at -1.
  const auto bbb = explore_word(w, 1.0, "bbb");
  REQUIRE(bbb.chi.size() == 3);
  CHECK(bbb.chi[2] == 1.0);
  CHECK(bbb.truncated);  // never returns to -1 inside the walk
  CHECK_THROWS_AS(explore_word(w, 1.0, "x"), std::invalid_argument);
  CHECK(tr.to_json()["word"] == "b");
}

TEST_CASE("exploration invariants on sampled walks") {
  const StepLaw law = build_step_law(1.5);
  Rng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const auto w = sample_line_walk(law, 20000, rng);
    const auto tr = explore_word(w, 4.0, std::string(40, trial % 2 ? 'b' : 'h'));
    std::int64_t prev = 0;
    for (std::size_t k = 0; k < tr.S.size(); ++k) {
      CHECK(tr.S[k] > prev);
      if (k < tr.T.size() && tr.T[k] >= 0) {
        CHECK(tr.T[k] >= tr.S[k]);
        prev = tr.T[k];
      }
    }
    for (double c : tr.chi) CHECK(c > -1.0);
    CHECK(tr.count_b() + tr.count_h() == static_cast<std::int64_t>(tr.word.size()));
  }
}

TEST_CASE("successive underjumps are identically distributed") {
  const StepLaw law = build_step_law(1.5);
  Rng rng(32);
  std::vector<double> c1, c2, direct;
  while (c2.size() < 3000) {
    const auto w = sample_line_walk(law, 4000, rng);
    const auto tr = explore_word(w, 5.0, "bb");
    if (tr.chi.size() >= 1) c1.push_back(tr.chi[0]);
    if (tr.chi.size() >= 2) c2.push_back(tr.chi[1]);
  }
  direct = sample_underjumps(law, 5.0, 3000, rng, 4000);
  std::erase_if(direct, [](double c) { return std::isinf(c); });
  CHECK(ks_two_sample(c1, c2).p_value > 1e-3);
  CHECK(ks_two_sample(c1, direct).p_value > 1e-3);
}

TEST_CASE("exploration inequalities hold on sampled instances") {
  Rng rng(33);
  for (double alpha : {1.3, 1.5, 1.8}) {
    const StepLaw law = build_step_law(alpha);
    for (int trial = 0; trial < 60; ++trial) {
      const auto w = sample_line_walk(law, 400, rng);
      const auto t = static_cast<std::int64_t>(1 + rng.below(400));
      for (double eps : {0.5, 1.0, 3.0, 10.0}) {
        BoundsInstance li;
        REQUIRE_NOTHROW(li = exploration_bounds_instance(w, t, eps));
        CHECK(li.report.upper_slack >= -1e-9);
        CHECK(li.report.lower_slack >= -1e-9);
        CHECK(li.report.dstar >= li.report.v - 1e-9);
      }
    }
  }
}

TEST_CASE("no-jump prefix: empty word") {
  const auto w = line_walk_from_steps({-1, 0, -1, -1, 0});
  const auto li = exploration_bounds_instance(w, 5, 0.1);
  CHECK(li.trace.word.empty());
  CHECK(li.report.v == 3.0);
  CHECK(li.report.dstar == 3.0);
}

TEST_CASE("exploration bounds check rejects a violation") {
  ExplorationTrace tr;
  tr.word = "h";
  CHECK_THROWS_AS(check_exploration_bounds(tr, 0.0, 5.0, 0.1), InequalityViolation);
  CHECK_THROWS_AS(check_exploration_bounds(tr, 0.0, 0.0, 0.1), InequalityViolation);
  CHECK_NOTHROW(check_exploration_bounds(tr, 0.1, 0.3, 0.1));
}

TEST_CASE("underjump tail exponent, coarse") {
  const StepLaw law = build_step_law(1.5);
  Rng rng(34);
  const auto chi = sample_underjumps(law, 5.0, 5000, rng, 200000);
  const auto fit = fit_underjump_tail(chi, 1.0, 30.0, 20);
  CHECK(fit.beta == doctest::Approx(0.5).epsilon(0.4));
  // First passage has a t^(-1/3) tail at this alpha, so a few percent of
  // runs outlast the step budget.
  CHECK(fit.censored < 500);
}

TEST_CASE("bad-word probability decays and sits inside its bracket") {
  const StepLaw law = build_step_law(1.5);
  Rng rng(35);
  const auto pool = sample_underjumps(law, 5.0, 5000, rng, 200000);
  const auto fit = badword_decay(pool, 0.1, {5, 10, 20}, 50000, rng);
  REQUIRE(fit.points.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& p = fit.points[i];
    CHECK(p.log_prob_lower <= p.log_prob_upper);
    CHECK(p.log_prob >= p.log_prob_lower - 5.0 * p.rel_error);
    CHECK(p.log_prob <= p.log_prob_upper + 5.0 * p.rel_error);
    if (i > 0) CHECK(p.log_prob < fit.points[i - 1].log_prob);
  }
  CHECK(fit.slope < 0.0);
}
