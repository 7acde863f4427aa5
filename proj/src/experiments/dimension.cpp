#include <algorithm>
#include <cmath>

#include "shred/experiments.hpp"
#include "shred/stats.hpp"

namespace shred {

nlohmann::json DimensionConfig::to_json() const {
  return {{"alpha", alpha}, {"n", n},         {"maps", maps},         {"centers", centers},
          {"r_min", r_min}, {"r_max", r_max}, {"radii", radii},       {"eta", eta},
          {"probe_eps", probe_eps}, {"probe_points", probe_points}, {"seed", seed}};
}

namespace {

struct MapResult {
  std::vector<std::vector<double>> log_volume;  // per center, per radius
  std::vector<std::int64_t> centers;            // walk indices
  std::vector<std::int64_t> flanked;            // per probe epsilon
};

// Jump times (k + 1) / n of up-steps k, with E before and after.
bool has_flanking_jump(const DiscreteExcursion& e, const std::vector<std::int64_t>& jumps,
                       std::int64_t u, double window, double delta, bool left) {
  const double eu = static_cast<double>(e.height(u));
  // Jump at step k happens at time k + 1.
  auto lo = std::lower_bound(jumps.begin(), jumps.end(),
                             left ? static_cast<std::int64_t>(std::floor(u - window)) : u);
  for (auto it = lo; it != jumps.end(); ++it) {
    const double time = static_cast<double>(*it + 1);
    if (left) {
      if (time >= static_cast<double>(u)) break;
      if (time <= static_cast<double>(u) - window) continue;
    } else {
      if (time >= static_cast<double>(u) + window) break;
      if (time <= static_cast<double>(u)) continue;
    }
    const double pre = static_cast<double>(e.height(*it));
    const double post = static_cast<double>(e.height(*it + 1));
    if (pre <= eu - delta && post >= eu + delta) return true;
  }
  return false;
}

}  // namespace

Report dimension_fit(const DimensionConfig& cfg) {
  if (cfg.maps < 1 || cfg.centers < cfg.maps || cfg.radii < 2 || !(cfg.r_min < cfg.r_max)) {
    throw std::invalid_argument("dimension_fit: bad configuration");
  }
  Report rep;
  rep.suite = "dimension";
  rep.config = cfg.to_json();
  const StepLaw law = build_step_law(cfg.alpha);
  const double unit = std::pow(static_cast<double>(cfg.n), 1.0 / cfg.alpha);
  std::vector<double> radii(static_cast<std::size_t>(cfg.radii));
  for (std::size_t i = 0; i < radii.size(); ++i) {
    radii[i] = cfg.r_min * std::pow(cfg.r_max / cfg.r_min,
                                    static_cast<double>(i) / static_cast<double>(radii.size() - 1));
  }
  const auto maps = static_cast<std::size_t>(cfg.maps);
  std::vector<MapResult> res(maps);
  parallel_for(maps, cfg.jobs, [&](std::size_t mi) {
    Rng walk_rng(cfg.seed, mi, StreamTag::kWalk);
    Rng center_rng(cfg.seed, mi, StreamTag::kCenters);
    const auto e = sample_excursion(law, cfg.n, walk_rng);
    const auto m = build_map(e);
    const auto coded = static_cast<std::uint64_t>(m.vertex_count() - 1);
    const std::int64_t here =
        cfg.centers / cfg.maps + (static_cast<std::int64_t>(mi) < cfg.centers % cfg.maps ? 1 : 0);
    auto& out = res[mi];
    for (std::int64_t c = 0; c < here; ++c) {
      const auto v = static_cast<std::int32_t>(center_rng.below(coded));
      const auto d = bfs_distance(m, v);
      std::vector<std::int32_t> sorted(d);
      std::sort(sorted.begin(), sorted.end());
      std::vector<double> lv;
      for (double r : radii) {
        const auto R = static_cast<std::int32_t>(std::floor(r * unit));
        const auto count = std::upper_bound(sorted.begin(), sorted.end(), R) - sorted.begin();
        lv.push_back(std::log(static_cast<double>(count) / static_cast<double>(m.vertex_count())));
      }
      out.log_volume.push_back(lv);
      out.centers.push_back(m.walk_index(v));
    }
    std::vector<std::int64_t> jumps;
    for (std::int64_t k = 0; k <= e.n(); ++k) {
      if (e.steps()[static_cast<std::size_t>(k)] >= 1) jumps.push_back(k);
    }
    out.flanked.assign(cfg.probe_eps.size(), 0);
    for (std::int64_t p = 0; p < cfg.probe_points; ++p) {
      const auto u = static_cast<std::int64_t>(1 + center_rng.below(static_cast<std::uint64_t>(e.n())));
      for (std::size_t i = 0; i < cfg.probe_eps.size(); ++i) {
        const double eps = cfg.probe_eps[i];
        const double window = eps * static_cast<double>(cfg.n);
        const double delta = std::pow(eps, 1.0 / cfg.alpha + cfg.eta) * unit;
        if (has_flanking_jump(e, jumps, u, window, delta, true) &&
            has_flanking_jump(e, jumps, u, window, delta, false)) {
          ++out.flanked[i];
        }
      }
    }
  });

  Table balls{"dimension_balls", {"map", "center", "r", "log_r", "log_volume_fraction"}};
  std::vector<double> log_r;
  for (double r : radii) log_r.push_back(std::log(r));
  std::vector<double> mean_lv(radii.size(), 0.0);
  std::vector<double> slopes;
  std::size_t total = 0;
  for (std::size_t mi = 0; mi < maps; ++mi) {
    for (std::size_t c = 0; c < res[mi].log_volume.size(); ++c) {
      const auto& lv = res[mi].log_volume[c];
      for (std::size_t i = 0; i < radii.size(); ++i) {
        mean_lv[i] += lv[i];
        balls.add({cell(static_cast<std::int64_t>(mi)), cell(res[mi].centers[c]), cell(radii[i]),
                   cell(log_r[i]), cell(lv[i])});
      }
      slopes.push_back(least_squares(log_r, lv).slope);
      ++total;
    }
  }
  for (auto& x : mean_lv) x /= static_cast<double>(total);
  const LinearFit pooled = least_squares(log_r, mean_lv);
  double mean_slope = 0.0, var = 0.0;
  for (double s : slopes) mean_slope += s;
  mean_slope /= static_cast<double>(slopes.size());
  for (double s : slopes) var += (s - mean_slope) * (s - mean_slope);
  const double se = slopes.size() > 1
                        ? std::sqrt(var / static_cast<double>(slopes.size() - 1) /
                                    static_cast<double>(slopes.size()))
                        : 0.0;
  rep.results["slope"] = pooled.slope;
  rep.results["intercept"] = pooled.intercept;
  rep.results["r_squared"] = pooled.r_squared;
  rep.results["center_slope_mean"] = mean_slope;
  rep.results["ci95"] = {mean_slope - 1.96 * se, mean_slope + 1.96 * se};
  rep.results["centers"] = total;

  Table probe{"dimension_blocking_probe", {"epsilon", "delta_rescaled", "points", "flanked", "frequency"}};
  std::vector<double> freq;
  for (std::size_t i = 0; i < cfg.probe_eps.size(); ++i) {
    std::int64_t hits = 0;
    for (const auto& r : res) hits += r.flanked[i];
    const std::int64_t points = cfg.probe_points * cfg.maps;
    const double f = static_cast<double>(hits) / static_cast<double>(points);
    freq.push_back(f);
    probe.add({cell(cfg.probe_eps[i]), cell(std::pow(cfg.probe_eps[i], 1.0 / cfg.alpha + cfg.eta)),
               cell(points), cell(hits), cell(f)});
  }
  rep.results["blocking_frequency"] = freq;
  // Frequencies listed along decreasing epsilon should not drop.
  std::vector<std::size_t> order(cfg.probe_eps.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return cfg.probe_eps[a] > cfg.probe_eps[b]; });
  bool rising = true;
  for (std::size_t i = 1; i < order.size(); ++i) rising &= freq[order[i]] >= freq[order[i - 1]];

  rep.check("slope_within_0.3_of_alpha", std::abs(pooled.slope - cfg.alpha) <= 0.3,
            {{"slope", pooled.slope}, {"alpha", cfg.alpha}}, true);
  rep.check("blocking_frequency_rises_as_eps_shrinks", rising, {{"frequency", freq}}, true);
  rep.tables = {std::move(balls), std::move(probe)};
  return rep;
}

}  // namespace shred
