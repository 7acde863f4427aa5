#include <algorithm>
#include <cmath>

#include "shred/experiments.hpp"
#include "shred/heightvar.hpp"
#include "shred/stats.hpp"

namespace shred {

nlohmann::json IdentifyConfig::to_json() const {
  return {{"alpha", alpha}, {"n", n},       {"maps", maps},
          {"sources", sources}, {"taus", taus}, {"quantile", quantile},
          {"intercept_threshold", intercept_threshold}, {"seed", seed}};
}

namespace {

struct ProbePair {
  std::int64_t u;
  std::int64_t v;
  double v_resc;
  double tree_resc;  // min(D^up, D^down) n^{-1/alpha}
};

}  // namespace

Report identification_probe(const IdentifyConfig& cfg) {
  if (cfg.taus.empty() || cfg.maps < 1 || cfg.sources < 1) {
    throw std::invalid_argument("identification_probe: bad configuration");
  }
  Report rep;
  rep.suite = "identify";
  rep.config = cfg.to_json();
  const StepLaw law = build_step_law(cfg.alpha);
  const double scale = std::pow(static_cast<double>(cfg.n), -1.0 / cfg.alpha);
  const double tau_max = *std::max_element(cfg.taus.begin(), cfg.taus.end());
  const auto maps = static_cast<std::size_t>(cfg.maps);
  std::vector<std::vector<ProbePair>> small(maps);
  std::vector<std::vector<double>> control(maps);
  parallel_for(maps, cfg.jobs, [&](std::size_t mi) {
    Rng walk_rng(cfg.seed, mi, StreamTag::kWalk);
    Rng src_rng(cfg.seed, mi, StreamTag::kPairs);
    const auto e = sample_excursion(law, cfg.n, walk_rng);
    const auto ct = coded_times(e);
    const SlitList sl = slits_of(e);
    const DiscreteTreeMetrics tm(e);
    std::vector<VTarget> targets(ct.size());
    for (std::size_t i = 0; i < ct.size(); ++i) {
      const auto k = ct.down_index[i];
      targets[i] = {static_cast<double>(k) + 0.5, e.coded_height(k)};
    }
    for (std::int64_t s = 0; s < cfg.sources; ++s) {
      const auto i = static_cast<std::size_t>(src_rng.below(ct.size()));
      const auto u = ct.down_index[i];
      const auto vs = v_from(sl, targets[i].x, targets[i].h, targets, VMode::kCylinder);
      for (std::size_t j = 0; j < ct.size(); ++j) {
        if (j == i) continue;
        const auto v = ct.down_index[j];
        const double vr = vs[j] * scale;
        const double tr =
            static_cast<double>(std::min(tm.d_up(u, v), tm.d_down(u, v))) * scale;
        if (vr <= tau_max) {
          small[mi].push_back({u, v, vr, tr});
        } else if (vr >= 0.5) {
          control[mi].push_back(tr / vr);
        }
      }
    }
  });

  Table pairs_t{"identify_pairs", {"map", "u", "v", "V_rescaled", "tree_min_rescaled"}};
  std::vector<ProbePair> all;
  std::vector<double> ctrl;
  for (std::size_t mi = 0; mi < maps; ++mi) {
    for (const auto& p : small[mi]) {
      all.push_back(p);
      pairs_t.add({cell(static_cast<std::int64_t>(mi)), cell(p.u), cell(p.v), cell(p.v_resc),
                   cell(p.tree_resc)});
    }
    ctrl.insert(ctrl.end(), control[mi].begin(), control[mi].end());
  }
  Table curve_t{"identify_curve", {"tau", "pairs", "quantile_tree_min"}};
  std::vector<double> xs, ys;
  bool nondecreasing = true;
  double prev = -1.0;
  std::vector<double> taus(cfg.taus);
  std::sort(taus.begin(), taus.end());
  for (double tau : taus) {
    std::vector<double> sel;
    for (const auto& p : all) {
      if (p.v_resc <= tau) sel.push_back(p.tree_resc);
    }
    const double qv = sel.empty() ? std::nan("") : quantile(sel, cfg.quantile);
    curve_t.add({cell(tau), cell(static_cast<std::int64_t>(sel.size())), cell(qv)});
    if (!sel.empty()) {
      xs.push_back(tau);
      ys.push_back(qv);
      nondecreasing &= qv >= prev;
      prev = qv;
    }
  }
  const bool fit_ok = xs.size() >= 2;
  const LinearFit lf = fit_ok ? least_squares(xs, ys) : LinearFit{};
  rep.results["intercept"] = fit_ok ? lf.intercept : std::nan("");
  rep.results["slope"] = fit_ok ? lf.slope : std::nan("");
  rep.results["small_pairs"] = all.size();
  rep.results["control_pairs"] = ctrl.size();
  // Control: for pairs with large V, tree distance is not small relative to V.
  const double ctrl_med = ctrl.empty() ? std::nan("") : median(ctrl);
  rep.results["control_median_ratio"] = ctrl_med;
  rep.check("curve_nondecreasing_in_tau", nondecreasing, {{"values", ys}}, true);
  rep.check("intercept_below_threshold", fit_ok && lf.intercept < cfg.intercept_threshold,
            {{"intercept", fit_ok ? lf.intercept : std::nan("")},
             {"threshold", cfg.intercept_threshold}},
            true);
  rep.check("control_no_collapse", !ctrl.empty() && ctrl_med >= 1.0,
            {{"median_tree_over_V", ctrl_med}}, true);
  rep.tables = {std::move(pairs_t), std::move(curve_t)};
  return rep;
}

}  // namespace shred
