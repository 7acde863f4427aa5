// Acceptance run: one PASS/FAIL line per criterion. Exit 0 only if every
// criterion passes, except those named with --expect-fail, which still print
// FAIL (tagged as expected) but do not change the exit code.
// Reports of the statistical suites are written under --out for plotting.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "oracles.hpp"
#include "shred/causal_map.hpp"
#include "shred/codec.hpp"
#include "shred/errors.hpp"
#include "shred/excursion.hpp"
#include "shred/experiments.hpp"
#include "shred/graph.hpp"
#include "shred/heightvar.hpp"
#include "shred/io.hpp"
#include "shred/metrics.hpp"
#include "shred/steps.hpp"

namespace fs = std::filesystem;
using namespace shred;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double x, int prec = 4) {
  std::ostringstream os;
  os << std::setprecision(prec) << x;
  return os.str();
}

std::string join(const nlohmann::json& arr, int prec = 4) {
  std::string s = "[";
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (i) s += ", ";
    s += fmt(arr[i].get<double>(), prec);
  }
  return s + "]";
}

const nlohmann::json& find_check(const Report& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c["name"] == name) return c;
  throw std::logic_error("report " + r.suite + " has no check " + name);
}

// Byte image of a report: report.json plus every table as CSV.
std::string fingerprint(const Report& r) {
  std::ostringstream os;
  os << r.to_json().dump(2);
  for (const auto& t : r.tables) {
    os << "\n--" << t.name << "\n";
    write_csv(os, t);
  }
  return os.str();
}

// ---------------------------------------------------------------------------

Outcome bijection_and_counting() {
  const std::vector<std::size_t> expected{1, 2, 5, 14, 42};
  std::string counts;
  bool ok = true;
  for (std::int64_t n = 1; n <= 5; ++n) {
    const auto all = oracle::all_excursions(n);
    std::set<std::string> images;
    for (const auto& s : all) {
      const DiscreteExcursion e(s);
      const auto mc = walk_to_multimers(e);
      ok &= multimers_to_walk(mc) == e;
      std::ostringstream os;
      write_multimers_csv(os, mc);
      std::istringstream is(os.str());
      ok &= multimers_to_walk(read_multimers_csv(is)) == e;
      images.insert(os.str());
    }
    ok &= all.size() == expected[static_cast<std::size_t>(n - 1)];
    ok &= images.size() == all.size();
    counts += (n > 1 ? "," : "") + std::to_string(all.size());
  }
  return {ok, "counts " + counts + ", round trips and injectivity on every walk"};
}

Outcome tree_formulas() {
  std::int64_t pairs = 0, mismatches = 0;
  for (std::int64_t n = 1; n <= 8; ++n) {
    for (const auto& s : oracle::all_excursions(n)) {
      const DiscreteExcursion e(s);
      const auto m = build_map(e);
      const auto t = build_trees(m);
      const auto up = t.up_graph(), down = t.down_graph();
      const DiscreteTreeMetrics tm(e);
      const std::int32_t coded = m.vertex_count() - 1;
      for (std::int32_t a = 0; a < coded; ++a) {
        const auto du = bfs(up, a), dd = bfs(down, a);
        for (std::int32_t b = 0; b < coded; ++b) {
          const auto ia = m.walk_index(a), ib = m.walk_index(b);
          mismatches += du[static_cast<std::size_t>(b)] != tm.d_up(ia, ib);
          mismatches += dd[static_cast<std::size_t>(b)] != tm.d_down(ia, ib);
          ++pairs;
        }
      }
    }
  }
  return {mismatches == 0 && pairs > 0,
          std::to_string(pairs) + " ordered pairs, " + std::to_string(mismatches) + " mismatches"};
}

Outcome exact_sandwich(std::uint64_t seed, int jobs) {
  std::int64_t pairs = 0;
  try {
    for (std::int64_t n = 1; n <= 8; ++n) {
      for (const auto& s : oracle::all_excursions(n)) {
        const DiscreteExcursion e(s);
        const auto m = build_map(e);
        pairs += static_cast<std::int64_t>(discrete_sandwich(e, m, all_coded_pairs(m), 1.5).rows.size());
      }
    }
    const std::int64_t exhaustive = pairs;
    constexpr std::int64_t kN = 10000, kMaps = 10, kSources = 10, kPerSource = 100;
    std::string gaps;
    for (const double alpha : {1.3, 1.5, 1.8}) {
      const StepLaw law = build_step_law(alpha);
      std::vector<std::int64_t> counts(kMaps);
      std::vector<double> max_gap(kMaps);
      parallel_for(kMaps, jobs, [&](std::size_t i) {
        const std::uint64_t key = (static_cast<std::uint64_t>(alpha * 10) << 32) | i;
        Rng wr(seed, key, StreamTag::kWalk), pr(seed, key, StreamTag::kPairs);
        const auto e = sample_excursion(law, kN, wr);
        const auto m = build_map(e);
        const auto rep = discrete_sandwich(e, m, sample_coded_pairs(m, kSources, kPerSource, pr), alpha);
        counts[i] = static_cast<std::int64_t>(rep.rows.size());
        max_gap[i] = rep.max_gap;
      });
      double g = 0.0;
      for (std::size_t i = 0; i < counts.size(); ++i) {
        pairs += counts[i];
        g = std::max(g, max_gap[i]);
      }
      gaps += (gaps.empty() ? "" : ", ") + fmt(alpha, 2) + ":" + fmt(g);
    }
    return {true, std::to_string(exhaustive) + " exhaustive + " + std::to_string(pairs - exhaustive) +
                      " sampled pairs, 0 violations (max rescaled gap " + gaps + ")"};
  } catch (const SandwichViolation& e) {
    return {false, std::string("violation: ") + e.what()};
  }
}

Outcome v_engine_oracle(std::uint64_t seed) {
  Rng rng(seed, 0, StreamTag::kOracle);
  double worst = 0.0;
  std::int64_t max_gates = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto m = static_cast<std::size_t>(rng.below(16));
    SlitList sl;
    sl.circumference = static_cast<double>(m + 2);
    std::vector<Gate> gates;
    for (std::size_t k = 0; k < m; ++k) {
      double a = rng.uniform() * 10.0, b = rng.uniform() * 10.0;
      if (rng.below(3) == 0) {
        a = std::floor(a);
        b = std::floor(b);
      }
      if (a > b) std::swap(a, b);
      const double x = static_cast<double>(k + 1);
      sl.slits.push_back({x, a, b});
      if (b > a) gates.push_back({x, a, b});
    }
    max_gates = std::max<std::int64_t>(max_gates, static_cast<std::int64_t>(gates.size()));
    const double hs = rng.uniform() * 10.0, ht = rng.uniform() * 10.0;
    const double t = static_cast<double>(m + 1);
    const double got = v_distance(sl, 0.0, t, hs, ht, VMode::kLine, false).value;
    const double want = oracle::v_enumerate(gates, hs, ht);
    worst = std::max(worst, std::abs(got - want));
  }
  return {worst <= 1e-9, "1000 instances, up to " + std::to_string(max_gates) +
                             " gates, max |V - oracle| = " + fmt(worst, 3)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance run"};
  std::uint64_t seed = 20240601;
  int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::string out = "acceptance_out";
  app.add_option("--seed", seed)->capture_default_str();
  app.add_option("--jobs", jobs)->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--out", out, "Directory for suite reports")->capture_default_str();
  std::vector<std::string> expect_fail;
  app.add_option("--expect-fail", expect_fail, "Criteria known to fail; reported but not fatal");
  CLI11_PARSE(app, argc, argv);

  int failures = 0, expected = 0;
  auto expected_to_fail = [&](const std::string& name) {
    return std::find(expect_fail.begin(), expect_fail.end(), name) != expect_fail.end();
  };
  auto emit = [&](const std::string& name, double limit_s, const std::function<Outcome()>& fn) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (limit_s > 0 && secs > limit_s) {
      o.pass = false;
      o.detail += "; runtime limit " + fmt(limit_s, 6) + " s exceeded";
    }
    const bool xfail = expected_to_fail(name);
    if (!o.pass) (xfail ? expected : failures) += 1;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << " ("
              << fmt(secs, 3) << " s)" << (xfail ? (o.pass ? " [listed as expected failure]" : " [expected failure]") : "")
              << std::endl;
  };

  const fs::path dir(out);
  std::vector<std::pair<std::string, std::function<Report(int)>>> suites;
  std::deque<Report> reports;  // stable addresses
  auto run_suite = [&](const std::string& tag, std::function<Report(int)> fn) -> const Report& {
    suites.emplace_back(tag, fn);
    reports.push_back(fn(jobs));
    write_report(dir / tag, reports.back());
    write_manifest(dir / tag);
    return reports.back();
  };

  emit("bijection_and_counting", 60, bijection_and_counting);
  emit("tree_formulas", 0, tree_formulas);
  emit("exact_sandwich", 600, [&] { return exact_sandwich(seed, jobs); });
  emit("v_engine_oracle", 120, [&] { return v_engine_oracle(seed); });

  emit("gap_trend", 3600, [&] {
    GapConfig c;
    c.seed = seed;
    const auto& r = run_suite("gap", [c](int j) {
      auto cc = c;
      cc.jobs = j;
      return gap_study(cc);
    });
    const auto pair_meds = find_check(r, "pair_median_gap_strictly_decreasing")["detail"]["medians"];
    const auto trial_meds =
        find_check(r, "median_trial_max_gap_strictly_decreasing")["detail"]["medians"];
    const bool ok = find_check(r, "pair_median_gap_strictly_decreasing")["passed"].get<bool>();
    return Outcome{ok, "pairwise median gap over n=1e3,1e4,1e5: " + join(pair_meds) +
                           "; median per-trial max gap: " + join(trial_meds)};
  });

  WordsConfig wc;
  wc.seed = seed;
  const Report* words = nullptr;
  emit("exploration_bounds", 0, [&] {
    words = &run_suite("words", [wc](int j) {
      auto cc = wc;
      cc.jobs = j;
      return words_suite(cc);
    });
    const auto& l = words->results["bounds"];
    return Outcome{l["violations"].get<std::int64_t>() == 0,
                   std::to_string(l["instances"].get<std::int64_t>()) +
                       " instance checks over eps {0.05, 0.1}, " +
                       std::to_string(l["violations"].get<std::int64_t>()) +
                       " violations; time covers the whole words suite"};
  });
  emit("underjump_tail", 0, [&] {
    if (!words) throw std::runtime_error("words suite did not run");
    bool ok = true;
    std::string d;
    for (const auto& u : words->results["underjump"]) {
      const double a = u["alpha"], b = u["beta_hat"];
      const auto n = u["samples"].get<std::int64_t>();
      ok &= std::abs(b - (a - 1.0)) <= 0.1 && n >= 100000;
      d += (d.empty() ? "" : "; ") + std::string("alpha ") + fmt(a, 2) + ": beta_hat " + fmt(b) +
           " vs " + fmt(a - 1.0, 2) + " (" + std::to_string(n) + " samples)";
    }
    return Outcome{ok && words->results["underjump"].size() == 2,
                   d + "; sampled during the words suite above"};
  });
  emit("badword_decay", 0, [&] {
    if (!words) throw std::runtime_error("words suite did not run");
    const auto& c = find_check(*words, "badword_log_prob_strictly_decreasing");
    return Outcome{c["passed"].get<bool>(),
                   "log P(sum chi <= 0.1 m) at m=20,40,80: " + join(c["detail"]["log_prob"]) +
                       "; estimated during the words suite above"};
  });

  emit("counterexample", 0, [&] {
    CounterexampleConfig c;
    const auto& r = run_suite("counterexample", [c](int) { return counterexample_suite(c); });
    bool ok = true;
    for (const char* n : {"V01_exactly_zero", "Dstar01_nondecreasing_in_K", "Dstar10_exceeds_Dstar2"})
      ok &= find_check(r, n)["passed"].get<bool>();
    return Outcome{ok, "V(0,1) = 0 for K=1..10; D*_K(0,1) = " +
                           join(find_check(r, "Dstar01_nondecreasing_in_K")["detail"]["values"], 3)};
  });

  emit("dimension", 1800, [&] {
    bool ok = true;
    std::string d;
    for (const double a : {1.5, 1.8}) {
      DimensionConfig c;
      c.alpha = a;
      c.seed = seed;
      const auto& r = run_suite("dimension_" + fmt(a, 2), [c](int j) {
        auto cc = c;
        cc.jobs = j;
        return dimension_fit(cc);
      });
      const double s = r.results["slope"];
      ok &= std::abs(s - a) <= 0.3 && r.results["centers"].get<std::int64_t>() >= 50;
      d += (d.empty() ? "" : "; ") + std::string("alpha ") + fmt(a, 2) + ": slope " + fmt(s);
    }
    return Outcome{ok, d};
  });

  emit("identification", 0, [&] {
    IdentifyConfig c;
    c.seed = seed;
    const auto& r = run_suite("identify", [c](int j) {
      auto cc = c;
      cc.jobs = j;
      return identification_probe(cc);
    });
    const double b = r.results["intercept"];
    return Outcome{std::isfinite(b) && b < 0.05, "intercept " + fmt(b) + " (threshold 0.05)"};
  });

  emit("determinism", 0, [&] {
    ScalingConfig sc;
    sc.seed = seed;
    run_suite("scaling", [sc](int j) {
      auto cc = sc;
      cc.jobs = j;
      return scaling_selfconsistency(cc);
    });
    // Re-run every suite with a different worker count and compare bytes.
    const int other = jobs == 1 ? 2 : 1;
    std::string bad;
    for (std::size_t i = 0; i < suites.size(); ++i) {
      if (fingerprint(suites[i].second(other)) != fingerprint(reports[i])) bad += " " + suites[i].first;
    }
    return Outcome{bad.empty(), std::to_string(suites.size()) + " suites re-run with jobs=" +
                                    std::to_string(other) +
                                    (bad.empty() ? ", all outputs bit-identical" : ", differ:" + bad)};
  });

  std::cout << failures << " unexpected failure(s), " << expected << " expected failure(s)"
            << std::endl;
  return failures == 0 ? 0 : 1;
}
