#include "shred/explore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include "shred/errors.hpp"
#include "shred/stats.hpp"

namespace shred {

SlitList LineWalk::slits() const {
  SlitList out;
  out.circumference = static_cast<double>(length());
  for (std::size_t k = 0; k + 1 < x.size(); ++k) {
    if (x[k + 1] > x[k]) {
      out.slits.push_back({static_cast<double>(k + 1), static_cast<double>(x[k]),
                           static_cast<double>(x[k + 1])});
    }
  }
  return out;
}

HeightProfile LineWalk::profile() const {
  std::vector<double> t(x.size()), h(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    t[k] = static_cast<double>(k);
    h[k] = static_cast<double>(x[k]);
  }
  return HeightProfile(std::move(t), std::move(h), ProfileMode::kLine);
}

LineWalk line_walk_from_steps(const std::vector<std::int64_t>& steps) {
  LineWalk w;
  w.x.resize(steps.size() + 1);
  w.x[0] = 0;
  for (std::size_t k = 0; k < steps.size(); ++k) {
    if (steps[k] < -1) throw std::invalid_argument("line walk step below -1");
    w.x[k + 1] = w.x[k] + steps[k];
  }
  return w;
}

LineWalk sample_line_walk(const StepLaw& law, std::int64_t length, Rng& rng) {
  std::vector<std::int64_t> steps(static_cast<std::size_t>(length));
  for (auto& s : steps) s = law.sample(rng);
  return line_walk_from_steps(steps);
}

std::int64_t ExplorationTrace::count_h() const {
  return std::count(word.begin(), word.end(), 'h');
}
std::int64_t ExplorationTrace::count_b() const {
  return std::count(word.begin(), word.end(), 'b');
}
double ExplorationTrace::chi_sum() const {
  double s = 0.0;
  for (double c : chi) s += c;
  return s;
}

nlohmann::json ExplorationTrace::to_json() const {
  return {{"epsilon", epsilon}, {"word", word},   {"S", S},
          {"T", T},             {"chi", chi},     {"truncated", truncated}};
}

namespace {

constexpr std::int64_t kNone = -1;

// First index >= from with X >= level.
std::int64_t first_at_least(const LineWalk& w, std::int64_t from, double level) {
  for (std::int64_t i = from; i <= w.length(); ++i) {
    if (static_cast<double>(w.x[static_cast<std::size_t>(i)]) >= level) return i;
  }
  return kNone;
}

// First index >= from with X == level (exact: down-steps are -1).
std::int64_t first_equal(const LineWalk& w, std::int64_t from, std::int64_t level) {
  for (std::int64_t i = from; i <= w.length(); ++i) {
    if (w.x[static_cast<std::size_t>(i)] == level) return i;
  }
  return kNone;
}

// One exploration step from T; returns false when S does not resolve.
bool next_stop(const LineWalk& w, double eps, char letter, std::int64_t t_prev,
               ExplorationTrace& tr) {
  const auto xt = w.x[static_cast<std::size_t>(t_prev)];
  const std::int64_t s = first_at_least(w, t_prev, static_cast<double>(xt) + eps);
  if (s == kNone) return false;
  const std::int64_t pre = w.x[static_cast<std::size_t>(s - 1)];
  tr.word.push_back(letter);
  tr.S.push_back(s);
  if (letter == 'h') {
    tr.T.push_back(s);
  } else {
    tr.chi.push_back(static_cast<double>(xt - pre) / eps);
    tr.T.push_back(first_equal(w, s, pre));
  }
  return true;
}

}  // namespace

ExplorationTrace explore_word(const LineWalk& w, double epsilon, const std::string& word) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("explore_word: epsilon must be > 0");
  ExplorationTrace tr;
  tr.epsilon = epsilon;
  std::int64_t t_prev = 0;
  for (char letter : word) {
    if (letter != 'h' && letter != 'b') {
      throw std::invalid_argument("explore_word: letters must be 'b' or 'h'");
    }
    if (!next_stop(w, epsilon, letter, t_prev, tr) || tr.T.back() == kNone) {
      tr.truncated = true;
      break;
    }
    t_prev = tr.T.back();
  }
  return tr;
}

ExplorationTrace word_of_optimal_path(const LineWalk& w, std::int64_t t, double epsilon,
                                      const VResult& witness) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("word_of_optimal_path: epsilon <= 0");
  ExplorationTrace tr;
  tr.epsilon = epsilon;
  std::int64_t t_prev = 0;
  while (true) {
    const auto xt = w.x[static_cast<std::size_t>(t_prev)];
    const std::int64_t s = first_at_least(w, t_prev, static_cast<double>(xt) + epsilon);
    if (s == kNone || s >= t) break;
    const auto it = std::find_if(witness.gates.begin(), witness.gates.end(),
                                 [&](const Gate& g) { return g.x == static_cast<double>(s); });
    if (it == witness.gates.end()) {
      throw AmbiguousSide("explored jump at " + std::to_string(s) +
                          " is not among the witness gates");
    }
    const Side side = witness.sides[static_cast<std::size_t>(it - witness.gates.begin())];
    next_stop(w, epsilon, side == Side::kBelow ? 'b' : 'h', t_prev, tr);
    if (tr.T.back() == kNone) break;
    t_prev = tr.T.back();
  }
  return tr;
}

ExplorationBoundsReport check_exploration_bounds(const ExplorationTrace& trace, double v_value,
                            double dstar_value, double epsilon, double tol) {
  ExplorationBoundsReport r;
  r.dstar = dstar_value;
  r.v = v_value;
  const auto nb = static_cast<double>(trace.count_b());
  const auto nh = static_cast<double>(trace.count_h());
  r.upper_slack = v_value + 2.0 * epsilon * nb + 2.0 * epsilon - dstar_value;
  r.lower_slack = v_value - epsilon * nh - epsilon * trace.chi_sum();
  // Relative tolerance for large walk-unit values.
  const double scale = std::max({1.0, std::abs(v_value), std::abs(dstar_value)});
  if (r.upper_slack < -tol * scale) {
    throw InequalityViolation("D* = " + std::to_string(dstar_value) + " exceeds V + 2eps#b + 2eps = " +
                              std::to_string(v_value + 2.0 * epsilon * nb + 2.0 * epsilon));
  }
  if (r.lower_slack < -tol * scale) {
    throw InequalityViolation("V = " + std::to_string(v_value) + " below eps#h + eps sum chi = " +
                              std::to_string(epsilon * nh + epsilon * trace.chi_sum()));
  }
  return r;
}

BoundsInstance exploration_bounds_instance(const LineWalk& w, std::int64_t t, double epsilon) {
  const SlitList slits = w.slits();
  const double h0 = static_cast<double>(w.x[0]);
  const double ht = static_cast<double>(w.x[static_cast<std::size_t>(t)]);
  const VResult vr = v_distance(slits, 0.0, static_cast<double>(t), h0, ht, VMode::kLine, true);
  LineWalk prefix;
  prefix.x.assign(w.x.begin(), w.x.begin() + t + 1);
  const double dstar = dstar_from(prefix.profile(), 0)[static_cast<std::size_t>(t)];
  BoundsInstance li;
  li.trace = word_of_optimal_path(w, t, epsilon, vr);
  li.report = check_exploration_bounds(li.trace, vr.value, dstar, epsilon);
  return li;
}

std::vector<double> sample_underjumps(const StepLaw& law, double epsilon,
                                      std::size_t count, Rng& rng,
                                      std::int64_t max_steps) {
  const auto& head = law.probs_head();
  bool head_has_up = false;
  for (std::size_t i = 2; i < head.size(); ++i) head_has_up |= head[i] > 0.0;
  const double tail = law.tail_mass();
  const bool fast = !head_has_up && tail > 0.0;
  const double down_given_head = head[0] / (1.0 - tail);
  std::vector<double> out;
  out.reserve(count);
  std::geometric_distribution<std::int64_t> gaps(fast ? tail : 0.5);
  for (std::size_t i = 0; i < count; ++i) {
    std::int64_t x = 0;
    std::int64_t time = 0;
    double chi = std::numeric_limits<double>::infinity();
    while (time < max_steps) {
      std::int64_t jump = 0;
      if (fast) {
        // Skip to the next tail step: a geometric run of -1/0 steps.
        const std::int64_t g = gaps(rng.engine());
        std::int64_t downs = 0;
        if (g > 0) {
          std::binomial_distribution<std::int64_t> b(g, down_given_head);
          downs = b(rng.engine());
        }
        x -= downs;
        time += g + 1;
        if (time > max_steps) break;
        jump = law.tail_value(rng.uniform_open());
      } else {
        jump = law.sample(rng);
        time += 1;
      }
      if (static_cast<double>(x + jump) >= epsilon) {
        chi = static_cast<double>(-x) / epsilon;
        break;
      }
      x += jump;
    }
    out.push_back(chi);
  }
  return out;
}

TailFit fit_underjump_tail(const std::vector<double>& chi, double r_min, double r_max,
                           std::size_t grid) {
  TailFit fit;
  fit.samples = chi.size();
  for (double c : chi) fit.censored += std::isinf(c) ? 1 : 0;
  std::vector<double> sorted(chi);
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> lx, ly;
  for (std::size_t g = 0; g < grid; ++g) {
    const double r =
        r_min * std::pow(r_max / r_min, static_cast<double>(g) / static_cast<double>(grid - 1));
    const auto above = static_cast<double>(
        sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), r));
    const double surv = above / static_cast<double>(sorted.size());
    fit.r.push_back(r);
    fit.survival.push_back(surv);
    if (surv > 0.0) {
      lx.push_back(std::log(r + 1.0));
      ly.push_back(std::log(surv));
    }
  }
  const LinearFit lf = least_squares(lx, ly);
  fit.beta = -lf.slope;
  fit.log_c = lf.intercept;
  fit.r_squared = lf.r_squared;
  return fit;
}

namespace {

// Log of P(sum of m draws <= q m) for a law on a grid of width delta whose
// atoms sit at offset + j delta, j >= 0.
double grid_log_prob(const std::vector<double>& pmf, double offset, double delta,
                     std::int64_t m, double q) {
  // Partial sums can be reduced by at most |offset| per remaining step, so
  // anything above q m + (remaining) |offset| can never come back.
  const double budget = q * static_cast<double>(m);
  const double lowest = offset;  // most negative atom
  auto limit_for = [&](std::int64_t remaining) {
    // Sum index j means value k*offset + j*delta after k draws.
    return budget - static_cast<double>(remaining) * lowest;
  };
  std::vector<double> cur{1.0};  // after 0 draws, value 0 at index 0
  for (std::int64_t k = 1; k <= m; ++k) {
    const double lim = limit_for(m - k) - static_cast<double>(k) * offset;
    const auto max_index = static_cast<std::int64_t>(std::floor(lim / delta + 1e-9));
    if (max_index < 0) return -std::numeric_limits<double>::infinity();
    std::vector<double> next(static_cast<std::size_t>(max_index) + 1, 0.0);
    for (std::size_t i = 0; i < cur.size(); ++i) {
      if (cur[i] == 0.0) continue;
      for (std::size_t j = 0; j < pmf.size() && i + j < next.size(); ++j) {
        next[i + j] += cur[i] * pmf[j];
      }
    }
    cur = std::move(next);
  }
  double total = 0.0;
  for (double v : cur) total += v;
  return total > 0.0 ? std::log(total) : -std::numeric_limits<double>::infinity();
}

}  // namespace

BadWordFit badword_decay(const std::vector<double>& pool, double q,
                         const std::vector<std::int64_t>& ms, std::int64_t trials,
                         Rng& rng) {
  std::vector<double> xs;
  for (double c : pool) {
    if (std::isfinite(c)) xs.push_back(c);
  }
  if (xs.empty()) throw std::invalid_argument("badword_decay: empty pool");
  std::sort(xs.begin(), xs.end());
  const auto npool = static_cast<double>(xs.size());
  // Tilted law proportional to exp(-theta x); pick theta so its mean is q
  // (no tilt if the plain mean is already below q).
  auto tilted_mean = [&](double theta) {
    double z = 0.0, m1 = 0.0;
    for (double x : xs) {
      const double w = std::exp(-theta * (x - xs.front()));
      z += w;
      m1 += w * x;
    }
    return m1 / z;
  };
  double theta = 0.0;
  if (tilted_mean(0.0) > q) {
    double lo = 0.0, hi = 1.0;
    while (tilted_mean(hi) > q && hi < 1e6) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (tilted_mean(mid) > q ? lo : hi) = mid;
    }
    theta = hi;
  }
  std::vector<double> weights(xs.size());
  double log_z = 0.0;
  {
    double z = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      weights[i] = std::exp(-theta * (xs[i] - xs.front()));
      z += weights[i];
    }
    // log E_pool[exp(-theta chi)].
    log_z = std::log(z / npool) - theta * xs.front();
  }
  std::discrete_distribution<std::size_t> draw(weights.begin(), weights.end());

  // Grid brackets: rounding every atom down (up) makes sums smaller (larger).
  const double delta = 0.02;
  const double offset = std::floor(xs.front() / delta) * delta;
  // Atoms above q m + m can never be part of a qualifying sum (chi >= -1).
  const double m_max = ms.empty() ? 1.0 : static_cast<double>(*std::max_element(ms.begin(), ms.end()));
  const double top = std::min(xs.back(), (q + 2.0) * m_max);
  const auto bins = static_cast<std::size_t>(std::ceil((top - offset) / delta)) + 2;
  std::vector<double> pmf_lo(bins, 0.0), pmf_hi(bins, 0.0);
  for (double x : xs) {
    const auto jl = static_cast<std::size_t>(std::floor((x - offset) / delta + 1e-12));
    const auto jh = static_cast<std::size_t>(std::ceil((x - offset) / delta - 1e-12));
    if (jl < bins) pmf_lo[jl] += 1.0 / npool;
    if (jh < bins) pmf_hi[jh] += 1.0 / npool;
  }

  BadWordFit fit;
  fit.q = q;
  std::vector<double> mx, my;
  for (std::int64_t m : ms) {
    BadWordPoint pt;
    pt.m = m;
    pt.theta = theta;
    // Pool atoms are multiples of 1/epsilon, so exact ties with q m are
    // common; absorb the rounding of the running sum.
    const double thresh = q * static_cast<double>(m) + 1e-9;
    double sum_w = 0.0, sum_w2 = 0.0;
    for (std::int64_t tr = 0; tr < trials; ++tr) {
      double s = 0.0;
      for (std::int64_t k = 0; k < m; ++k) s += xs[draw(rng.engine())];
      if (s <= thresh) {
        // Likelihood ratio of the plain law to the tilted one.
        const double lw = static_cast<double>(m) * log_z + theta * s;
        const double w = std::exp(lw);
        sum_w += w;
        sum_w2 += w * w;
      }
    }
    const auto n = static_cast<double>(trials);
    const double mean = sum_w / n;
    const double var = std::max(0.0, sum_w2 / n - mean * mean);
    pt.log_prob = mean > 0.0 ? std::log(mean) : -std::numeric_limits<double>::infinity();
    pt.rel_error = mean > 0.0 ? std::sqrt(var / n) / mean : std::numeric_limits<double>::infinity();
    pt.log_prob_lower = grid_log_prob(pmf_hi, offset, delta, m, q);
    pt.log_prob_upper = grid_log_prob(pmf_lo, offset, delta, m, q);
    fit.points.push_back(pt);
    if (std::isfinite(pt.log_prob)) {
      mx.push_back(static_cast<double>(m));
      my.push_back(pt.log_prob);
    }
  }
  if (mx.size() >= 2) fit.slope = least_squares(mx, my).slope;
  return fit;
}

}  // namespace shred
