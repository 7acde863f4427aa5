#include <cmath>

#include "shred/experiments.hpp"
#include "shred/stats.hpp"

namespace shred {

nlohmann::json ScalingConfig::to_json() const {
  return {{"alpha", alpha}, {"ns", ns}, {"trials", trials}, {"ks_level", ks_level},
          {"median_tolerance", median_tolerance}, {"seed", seed}};
}

Report scaling_selfconsistency(const ScalingConfig& cfg) {
  if (cfg.ns.size() < 2) throw std::invalid_argument("scaling: need at least two n");
  Report rep;
  rep.suite = "scaling";
  rep.config = cfg.to_json();
  const StepLaw law = build_step_law(cfg.alpha);
  static const char* kNames[] = {"peak", "value_half", "jump_mass_above_0.1"};
  Table samples_t{"scaling_samples", {"n", "trial", "peak", "value_half", "jump_mass_above_0.1"}};
  std::vector<std::array<std::vector<double>, 3>> f(cfg.ns.size());
  for (std::size_t ni = 0; ni < cfg.ns.size(); ++ni) {
    const auto n = cfg.ns[ni];
    const auto trials = static_cast<std::size_t>(cfg.trials);
    std::vector<std::array<double, 3>> vals(trials);
    parallel_for(trials, cfg.jobs, [&](std::size_t t) {
      // The list position keeps repeated n values independent.
      const std::uint64_t key = (static_cast<std::uint64_t>(ni) << 48) ^
                                (static_cast<std::uint64_t>(n) << 24) ^ t;
      Rng rng(cfg.seed, key, StreamTag::kWalk);
      const auto r = rescale(sample_excursion(law, n, rng), cfg.alpha);
      vals[t] = {r.peak(), r.value_at(0.5), r.jump_mass_above(0.1)};
    });
    for (std::size_t t = 0; t < trials; ++t) {
      samples_t.add({cell(n), cell(static_cast<std::int64_t>(t)), cell(vals[t][0]),
                     cell(vals[t][1]), cell(vals[t][2])});
      for (int k = 0; k < 3; ++k) f[ni][static_cast<std::size_t>(k)].push_back(vals[t][static_cast<std::size_t>(k)]);
    }
  }
  Table ks_t{"scaling_ks", {"n1", "n2", "functional", "ks_statistic", "p_value", "median1", "median2"}};
  bool ks_ok = true, med_ok = true;
  for (std::size_t ni = 1; ni < cfg.ns.size(); ++ni) {
    for (std::size_t k = 0; k < 3; ++k) {
      const auto ks = ks_two_sample(f[ni - 1][k], f[ni][k]);
      const double m1 = median(f[ni - 1][k]), m2 = median(f[ni][k]);
      ks_t.add({cell(cfg.ns[ni - 1]), cell(cfg.ns[ni]), kNames[k], cell(ks.statistic),
                cell(ks.p_value), cell(m1), cell(m2)});
      ks_ok &= ks.p_value >= cfg.ks_level;
      rep.results["ks"].push_back({{"n1", cfg.ns[ni - 1]},
                                   {"n2", cfg.ns[ni]},
                                   {"functional", kNames[k]},
                                   {"statistic", ks.statistic},
                                   {"p_value", ks.p_value}});
      if (k == 0) {
        const double ratio = m2 / m1;
        med_ok &= std::abs(ratio - 1.0) <= cfg.median_tolerance;
        rep.results["peak_median_ratio"].push_back(ratio);
      }
    }
  }
  rep.check("ks_all_functionals", ks_ok, {{"level", cfg.ks_level}}, true);
  rep.check("peak_medians_agree", med_ok, {{"tolerance", cfg.median_tolerance}}, true);
  rep.tables = {std::move(samples_t), std::move(ks_t)};
  return rep;
}

}  // namespace shred
