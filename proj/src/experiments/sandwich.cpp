#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "shred/errors.hpp"
#include "shred/experiments.hpp"
#include "shred/heightvar.hpp"
#include "shred/stats.hpp"

namespace shred {

std::vector<std::pair<std::int32_t, std::int32_t>> all_coded_pairs(const CausalMap& m) {
  std::vector<std::pair<std::int32_t, std::int32_t>> out;
  const std::int32_t coded = m.vertex_count() - 1;
  for (std::int32_t a = 0; a < coded; ++a)
    for (std::int32_t b = a + 1; b < coded; ++b) out.emplace_back(a, b);
  return out;
}

std::vector<std::pair<std::int32_t, std::int32_t>> sample_coded_pairs(
    const CausalMap& m, std::size_t sources, std::size_t per_source, Rng& rng) {
  const auto coded = static_cast<std::uint64_t>(m.vertex_count() - 1);
  std::vector<std::pair<std::int32_t, std::int32_t>> out;
  for (std::size_t s = 0; s < sources; ++s) {
    const auto a = static_cast<std::int32_t>(rng.below(coded));
    for (std::size_t k = 0; k < per_source; ++k) {
      auto b = static_cast<std::int32_t>(rng.below(coded));
      while (coded > 1 && b == a) b = static_cast<std::int32_t>(rng.below(coded));
      out.emplace_back(a, b);
    }
  }
  return out;
}

namespace {

std::string dump_instance(const DiscreteExcursion& e, const SandwichRow& r) {
  std::ostringstream os;
  os << "u=" << r.u << " v=" << r.v << " V=" << r.v_dist << " D=" << r.d << " D*=" << r.dstar
     << " Dup=" << r.d_up << " Ddown=" << r.d_down << " n=" << e.n();
  if (e.n() <= 200) {
    os << " steps=";
    for (auto s : e.steps()) os << s << ' ';
  }
  return os.str();
}

}  // namespace

SandwichReport discrete_sandwich(const DiscreteExcursion& e, const CausalMap& m,
                                 const std::vector<std::pair<std::int32_t, std::int32_t>>& pairs,
                                 double alpha) {
  const DualTrees trees = build_trees(m);
  const Graph glued = trees.union_graph();
  const DiscreteTreeMetrics tm(e);
  const SlitList slits = slits_of(e);
  const double scale = std::pow(static_cast<double>(e.n()), -1.0 / alpha);

  std::map<std::int32_t, std::vector<std::size_t>> by_source;
  for (std::size_t i = 0; i < pairs.size(); ++i) by_source[pairs[i].first].push_back(i);

  SandwichReport rep;
  rep.rows.resize(pairs.size());
  for (const auto& [a, idx] : by_source) {
    const auto d = bfs_distance(m, a);
    const auto ds = bfs(glued, a);
    const std::int64_t u = m.walk_index(a);
    std::vector<VTarget> targets;
    for (std::size_t i : idx) {
      const std::int64_t v = m.walk_index(pairs[i].second);
      targets.push_back({static_cast<double>(v) + 0.5, e.coded_height(v)});
    }
    const auto vs = v_from(slits, static_cast<double>(u) + 0.5, e.coded_height(u), targets,
                           VMode::kCylinder);
    for (std::size_t k = 0; k < idx.size(); ++k) {
      const auto b = pairs[idx[k]].second;
      SandwichRow r;
      r.a = a;
      r.b = b;
      r.u = u;
      r.v = m.walk_index(b);
      r.v_dist = vs[k];
      r.d = d[static_cast<std::size_t>(b)];
      r.dstar = ds[static_cast<std::size_t>(b)];
      r.d_up = tm.d_up(r.u, r.v);
      r.d_down = tm.d_down(r.u, r.v);
      // V is a sum of half-integer steps, so the comparison is exact up to
      // rounding of the sweep.
      const bool ok = r.v_dist <= static_cast<double>(r.d) + 1e-9 && r.d <= r.dstar &&
                      r.dstar <= std::min(r.d_up, r.d_down);
      if (!ok) throw SandwichViolation("sandwich violated: " + dump_instance(e, r));
      rep.max_gap = std::max(rep.max_gap, (static_cast<double>(r.dstar) - r.v_dist) * scale);
      rep.rows[idx[k]] = r;
    }
  }
  return rep;
}

nlohmann::json GapConfig::to_json() const {
  return {{"alpha", alpha}, {"ns", ns},       {"trials", trials}, {"pairs", pairs},
          {"sources", sources}, {"seed", seed}};
}

Report gap_study(const GapConfig& cfg) {
  if (cfg.sources < 1 || cfg.pairs < cfg.sources) {
    throw std::invalid_argument("gap_study: need 1 <= sources <= pairs");
  }
  Report rep;
  rep.suite = "gap";
  rep.config = cfg.to_json();
  const StepLaw law = build_step_law(cfg.alpha);
  Table pairs_t{"gap_pairs",
                {"n", "trial", "u", "v", "V", "D", "Dstar", "Dup", "Ddown", "gap_rescaled"}};
  Table summary_t{"gap_summary",
                  {"n", "pairs", "median_gap", "q25_gap", "q75_gap", "mean_gap",
                   "median_trial_max_gap", "max_gap", "violations"}};
  // Ties D* = V are common at every n, so the pairwise median is often
  // exactly 0; the median over trials of the per-map max gap is the
  // statistic that moves.
  std::vector<double> medians;
  std::vector<double> trial_max_medians;
  for (const auto n : cfg.ns) {
    const auto trials = static_cast<std::size_t>(cfg.trials);
    std::vector<SandwichReport> per(trials);
    const auto per_source = static_cast<std::size_t>(cfg.pairs / cfg.sources);
    parallel_for(trials, cfg.jobs, [&](std::size_t t) {
      const std::uint64_t key = (static_cast<std::uint64_t>(n) << 24) ^ t;
      Rng walk_rng(cfg.seed, key, StreamTag::kWalk);
      Rng pair_rng(cfg.seed, key, StreamTag::kPairs);
      const auto e = sample_excursion(law, n, walk_rng);
      const auto m = build_map(e);
      auto pairs = sample_coded_pairs(m, static_cast<std::size_t>(cfg.sources), per_source,
                                      pair_rng);
      // Top up when pairs is not a multiple of sources.
      while (pairs.size() < static_cast<std::size_t>(cfg.pairs)) {
        const auto extra = sample_coded_pairs(m, 1, 1, pair_rng);
        pairs.push_back(extra.front());
      }
      per[t] = discrete_sandwich(e, m, pairs, cfg.alpha);
    });
    const double scale = std::pow(static_cast<double>(n), -1.0 / cfg.alpha);
    std::vector<double> gaps;
    std::vector<double> trial_max;
    double max_gap = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
      for (const auto& r : per[t].rows) {
        const double g = (static_cast<double>(r.dstar) - r.v_dist) * scale;
        gaps.push_back(g);
        pairs_t.add({cell(n), cell(static_cast<std::int64_t>(t)), cell(r.u), cell(r.v),
                     cell(r.v_dist), cell(r.d), cell(r.dstar), cell(r.d_up), cell(r.d_down),
                     cell(g)});
      }
      max_gap = std::max(max_gap, per[t].max_gap);
      trial_max.push_back(per[t].max_gap);
    }
    const double med = median(gaps);
    const double tmed = median(trial_max);
    double mean = 0.0;
    for (const double g : gaps) mean += g;
    mean /= static_cast<double>(std::max<std::size_t>(1, gaps.size()));
    medians.push_back(med);
    trial_max_medians.push_back(tmed);
    summary_t.add({cell(n), cell(static_cast<std::int64_t>(gaps.size())), cell(med),
                   cell(quantile(gaps, 0.25)), cell(quantile(gaps, 0.75)), cell(mean), cell(tmed), cell(max_gap),
                   cell(std::int64_t{0})});
    rep.results["per_n"].push_back({{"n", n},
                                    {"pairs", gaps.size()},
                                    {"median_gap", med},
                                    {"mean_gap", mean},
                                    {"median_trial_max_gap", tmed},
                                    {"max_gap", max_gap},
                                    {"violations", 0}});
  }
  auto strictly_decreasing = [](const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
      if (!(v[i] < v[i - 1])) return false;
    return true;
  };
  rep.check("sandwich_zero_violations", true, {{"note", "any violation aborts the suite"}});
  rep.check("median_trial_max_gap_strictly_decreasing", strictly_decreasing(trial_max_medians),
            {{"medians", trial_max_medians}}, true);
  rep.check("pair_median_gap_strictly_decreasing", strictly_decreasing(medians),
            {{"medians", medians}}, true);
  rep.tables = {std::move(pairs_t), std::move(summary_t)};
  return rep;
}

}  // namespace shred
