#include <cmath>

#include "shred/errors.hpp"
#include "shred/experiments.hpp"
#include "shred/explore.hpp"

namespace shred {

nlohmann::json WordsConfig::to_json() const {
  return {{"alpha", alpha},
          {"walk_length", walk_length},
          {"instances", instances},
          {"epsilons", epsilons},
          {"tail_alphas", tail_alphas},
          {"tail_samples", tail_samples},
          {"tail_epsilon", tail_epsilon},
          {"tail_max_steps", tail_max_steps},
          {"tail_tolerance", tail_tolerance},
          {"bad_q", bad_q},
          {"bad_ms", bad_ms},
          {"bad_trials", bad_trials},
          {"seed", seed}};
}

namespace {

constexpr std::int64_t kChunk = 1000;

// Underjump samples in fixed chunks so the result does not depend on the
// number of workers.
std::vector<double> pooled_underjumps(const StepLaw& law, const WordsConfig& cfg,
                                      std::uint64_t stream) {
  const auto chunks = static_cast<std::size_t>((cfg.tail_samples + kChunk - 1) / kChunk);
  std::vector<std::vector<double>> parts(chunks);
  parallel_for(chunks, cfg.jobs, [&](std::size_t c) {
    Rng rng(cfg.seed, (stream << 32) ^ c, StreamTag::kExplore);
    const auto count = std::min<std::int64_t>(kChunk, cfg.tail_samples - static_cast<std::int64_t>(c) * kChunk);
    parts[c] = sample_underjumps(law, cfg.tail_epsilon, static_cast<std::size_t>(count), rng,
                                 cfg.tail_max_steps);
  });
  std::vector<double> out;
  for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

}  // namespace

Report words_suite(const WordsConfig& cfg) {
  Report rep;
  rep.suite = "words";
  rep.config = cfg.to_json();

  // Exploration inequalities on unconditioned walks, epsilon given in rescaled
  // units (walk units times L^{-1/alpha}); both sides scale linearly.
  const StepLaw law = build_step_law(cfg.alpha);
  const double unit = std::pow(static_cast<double>(cfg.walk_length), 1.0 / cfg.alpha);
  struct Row {
    std::int64_t t = 0;
    std::vector<BoundsInstance> li;
    std::vector<std::string> error;
  };
  const auto inst = static_cast<std::size_t>(cfg.instances);
  std::vector<Row> rows(inst);
  parallel_for(inst, cfg.jobs, [&](std::size_t i) {
    Rng rng(cfg.seed, i, StreamTag::kExplore);
    const auto w = sample_line_walk(law, cfg.walk_length, rng);
    rows[i].t = static_cast<std::int64_t>(1 + rng.below(static_cast<std::uint64_t>(cfg.walk_length)));
    for (double eps : cfg.epsilons) {
      try {
        rows[i].li.push_back(exploration_bounds_instance(w, rows[i].t, eps * unit));
        rows[i].error.emplace_back();
      } catch (const ShredError& e) {
        rows[i].li.emplace_back();
        rows[i].error.emplace_back(e.what());
      }
    }
  });
  Table bounds_t{"words_bounds",
                {"instance", "t", "epsilon", "word", "count_h", "count_b", "chi_sum", "V", "Dstar",
                 "upper_slack", "lower_slack", "error"}};
  std::int64_t violations = 0, checked = 0;
  for (std::size_t i = 0; i < inst; ++i) {
    for (std::size_t k = 0; k < cfg.epsilons.size(); ++k) {
      const auto& li = rows[i].li[k];
      ++checked;
      violations += rows[i].error[k].empty() ? 0 : 1;
      bounds_t.add({cell(static_cast<std::int64_t>(i)), cell(rows[i].t), cell(cfg.epsilons[k]),
                   li.trace.word, cell(li.trace.count_h()), cell(li.trace.count_b()),
                   cell(li.trace.chi_sum() * li.trace.epsilon / unit), cell(li.report.v / unit),
                   cell(li.report.dstar / unit), cell(li.report.upper_slack / unit),
                   cell(li.report.lower_slack / unit), rows[i].error[k]});
    }
  }
  rep.results["bounds"] = {{"instances", checked}, {"violations", violations}};
  rep.check("bounds_zero_violations", violations == 0, {{"checked", checked}});

  // Underjump tails.
  Table tail_t{"words_underjump_tail", {"alpha", "r", "survival"}};
  Table fit_t{"words_underjump_fit",
              {"alpha", "beta_hat", "beta_expected", "log_c", "r_squared", "samples", "censored",
               "min_chi"}};
  std::vector<double> pool;
  bool tails_ok = true, range_ok = true;
  for (std::size_t ai = 0; ai < cfg.tail_alphas.size(); ++ai) {
    const double a = cfg.tail_alphas[ai];
    const auto chi = pooled_underjumps(build_step_law(a), cfg, ai + 1);
    const auto fit = fit_underjump_tail(chi, 1.0, 100.0, 40);
    double min_chi = INFINITY;
    for (double c : chi) min_chi = std::min(min_chi, c);
    range_ok &= min_chi >= -1.0;
    const bool ok = std::abs(fit.beta - (a - 1.0)) <= cfg.tail_tolerance;
    tails_ok &= ok;
    for (std::size_t g = 0; g < fit.r.size(); ++g) {
      tail_t.add({cell(a), cell(fit.r[g]), cell(fit.survival[g])});
    }
    fit_t.add({cell(a), cell(fit.beta), cell(a - 1.0), cell(fit.log_c), cell(fit.r_squared),
               cell(static_cast<std::int64_t>(fit.samples)),
               cell(static_cast<std::int64_t>(fit.censored)), cell(min_chi)});
    rep.results["underjump"].push_back({{"alpha", a},
                                        {"beta_hat", fit.beta},
                                        {"censored", fit.censored},
                                        {"samples", fit.samples}});
    if (a == cfg.alpha) pool = chi;
  }
  rep.check("underjump_beta_within_tolerance", tails_ok, {{"tolerance", cfg.tail_tolerance}},
            true);
  rep.check("chi_at_least_minus_one", range_ok, nlohmann::json::object());

  // Bad words.
  if (pool.empty()) pool = pooled_underjumps(law, cfg, 0);
  Table bad_t{"words_badword",
              {"q", "m", "log_prob", "rel_error", "log_prob_lower", "log_prob_upper", "theta"}};
  Rng bad_rng(cfg.seed, 0, StreamTag::kBadword);
  const auto fit_q = badword_decay(pool, cfg.bad_q, cfg.bad_ms, cfg.bad_trials, bad_rng);
  const auto fit_half = badword_decay(pool, cfg.bad_q / 2.0, cfg.bad_ms, cfg.bad_trials, bad_rng);
  bool decreasing = true;
  for (const auto* f : {&fit_q, &fit_half}) {
    for (std::size_t i = 0; i < f->points.size(); ++i) {
      const auto& p = f->points[i];
      bad_t.add({cell(f->q), cell(p.m), cell(p.log_prob), cell(p.rel_error),
                 cell(p.log_prob_lower), cell(p.log_prob_upper), cell(p.theta)});
    }
  }
  for (std::size_t i = 1; i < fit_q.points.size(); ++i) {
    decreasing &= fit_q.points[i].log_prob < fit_q.points[i - 1].log_prob;
  }
  rep.results["badword"] = {{"q", cfg.bad_q},
                            {"slope", fit_q.slope},
                            {"slope_half_q", fit_half.slope}};
  std::vector<double> lp;
  for (const auto& p : fit_q.points) lp.push_back(p.log_prob);
  rep.check("badword_log_prob_strictly_decreasing", decreasing, {{"log_prob", lp}});
  rep.check("badword_rate_ordering", fit_half.slope <= fit_q.slope,
            {{"slope_q", fit_q.slope}, {"slope_half_q", fit_half.slope}}, true);
  rep.tables = {std::move(bounds_t), std::move(tail_t), std::move(fit_t), std::move(bad_t)};
  return rep;
}

}  // namespace shred
