#include <cmath>
#include <stdexcept>

#include "shred/experiments.hpp"
#include "shred/heightvar.hpp"

namespace shred {

namespace {

constexpr __int128 kLimit = static_cast<__int128>(1) << 110;

__int128 checked_mul(__int128 a, __int128 b) {
  if (a != 0 && (b > kLimit / a || b < -kLimit / a)) {
    throw std::invalid_argument("counterexample: exact arithmetic would overflow");
  }
  return a * b;
}

__int128 ipow(__int128 base, int e) {
  __int128 r = 1;
  for (int i = 0; i < e; ++i) r = checked_mul(r, base);
  return r;
}

}  // namespace

CounterexampleProfile::CounterexampleProfile(std::int64_t beta_num, std::int64_t beta_den,
                                             int depth)
    : p_(beta_num), q_(beta_den), depth_(depth) {
  if (beta_den <= 0 || beta_num <= 0) throw std::invalid_argument("counterexample: bad beta");
  if (2 * beta_num < beta_den || beta_num > beta_den) {
    throw std::invalid_argument("counterexample: beta must lie in [1/2, 1]");
  }
  if (depth < 1 || depth > 14) throw std::invalid_argument("counterexample: K in [1, 14]");
  grid_ = static_cast<std::int64_t>(ipow(3, depth));
  den_ = checked_mul(ipow(3, depth), ipow(q_, depth - 1));
  // Level k sits on intervals of length len = 3^(K-k+1) and contributes
  // beta^(k-1) * 3 (len - 2J) / len; over den that is scale_k * (len - 2J).
  scale_.resize(static_cast<std::size_t>(depth) + 1);
  for (int k = 1; k <= depth; ++k) {
    scale_[static_cast<std::size_t>(k)] =
        checked_mul(checked_mul(ipow(p_, k - 1), ipow(q_, depth - k)), ipow(3, k));
  }
  // |F| < 3 / (1 - beta) <= 6 q: keep sums far from the limit.
  checked_mul(den_, 8 * q_);
}

CounterexampleProfile CounterexampleProfile::from_beta(double beta, int depth) {
  std::int64_t best_p = 1, best_q = 1;
  double best_err = std::abs(beta - 1.0);
  for (std::int64_t q = 1; q <= 1000; ++q) {
    const auto p = static_cast<std::int64_t>(std::llround(beta * static_cast<double>(q)));
    const double err = std::abs(beta - static_cast<double>(p) / static_cast<double>(q));
    if (err < best_err - 1e-15) {
      best_err = err;
      best_p = p;
      best_q = q;
    }
  }
  return CounterexampleProfile(best_p, best_q, depth);
}

__int128 CounterexampleProfile::numerator(std::int64_t j, bool left_limit) const {
  if (j < 0 || j > grid_) throw std::out_of_range("counterexample: grid index");
  if (j == 0) left_limit = false;
  __int128 total = 0;
  std::int64_t pos = j;
  std::int64_t len = grid_;
  for (int k = 1; k <= depth_; ++k) {
    const std::int64_t third = len / 3;
    // Thirds are [0,1/3), [1/3,2/3), [2/3,1] for values and
    // [0,1/3], (1/3,2/3], (2/3,1] for left limits.
    const bool first = left_limit ? pos <= third : pos < third;
    const bool last = left_limit ? pos > 2 * third : pos >= 2 * third;
    if (!first && !last) {
      total += scale_[static_cast<std::size_t>(k)] * static_cast<__int128>(len - 2 * pos);
      break;  // deeper levels vanish on a middle third
    }
    if (last) pos -= 2 * third;
    len = third;
  }
  return total;
}

double CounterexampleProfile::value(std::int64_t j, bool left_limit) const {
  return static_cast<double>(numerator(j, left_limit)) / static_cast<double>(den_);
}

SlitList CounterexampleProfile::slits() const {
  SlitList out;
  out.circumference = 1.0;
  for (std::int64_t j = 1; j <= grid_; ++j) {
    const __int128 lo = numerator(j, true);
    const __int128 hi = numerator(j, false);
    if (hi > lo) {
      out.slits.push_back({static_cast<double>(j) / static_cast<double>(grid_),
                           static_cast<double>(lo) / static_cast<double>(den_),
                           static_cast<double>(hi) / static_cast<double>(den_)});
    }
  }
  return out;
}

HeightProfile CounterexampleProfile::breakpoint_profile() const {
  std::vector<double> t, h;
  for (std::int64_t j = 0; j <= grid_; ++j) {
    t.push_back(static_cast<double>(j) / static_cast<double>(grid_));
    h.push_back(value(j, false));
  }
  return HeightProfile(std::move(t), std::move(h), ProfileMode::kLine);
}

HeightProfile CounterexampleProfile::profile() const {
  std::vector<double> t, h;
  t.reserve(static_cast<std::size_t>(2 * grid_ + 1));
  h.reserve(static_cast<std::size_t>(2 * grid_ + 1));
  for (std::int64_t j = 0; j <= grid_; ++j) {
    const double x = static_cast<double>(j) / static_cast<double>(grid_);
    if (j > 0) {
      const __int128 lo = numerator(j, true);
      if (lo != numerator(j, false)) {
        t.push_back(x);
        h.push_back(static_cast<double>(lo) / static_cast<double>(den_));
      }
    }
    t.push_back(x);
    h.push_back(value(j, false));
  }
  return HeightProfile(std::move(t), std::move(h), ProfileMode::kLine);
}

nlohmann::json CounterexampleConfig::to_json() const {
  return {{"beta", beta}, {"k_min", k_min}, {"k_max", k_max}};
}

Report counterexample_suite(const CounterexampleConfig& cfg) {
  if (cfg.k_min < 1 || cfg.k_max < cfg.k_min) {
    throw std::invalid_argument("counterexample: need 1 <= k_min <= k_max");
  }
  Report rep;
  rep.suite = "counterexample";
  rep.config = cfg.to_json();
  Table t{"counterexample",
          {"K", "beta_num", "beta_den", "slits", "breakpoints", "V01", "Dstar01", "Dup01", "Ddown01",
           "Dstar01_with_left_limits"}};
  std::vector<double> dstar;
  bool v_zero = true;
  for (int k = cfg.k_min; k <= cfg.k_max; ++k) {
    const auto prof = CounterexampleProfile::from_beta(cfg.beta, k);
    const SlitList sl = prof.slits();
    const HeightProfile hp = prof.breakpoint_profile();
    const double v = v_distance(sl, 0.0, 1.0, prof.value(0, false), prof.value(prof.grid(), false),
                                VMode::kLine, false)
                         .value;
    const double d = dstar_from(hp, 0).back();
    const double d_exact = dstar_from(prof.profile(), 0).back();
    v_zero &= v == 0.0;
    dstar.push_back(d);
    t.add({cell(k), cell(prof.beta_num()), cell(prof.beta_den()),
           cell(static_cast<std::int64_t>(sl.slits.size())),
           cell(static_cast<std::int64_t>(hp.size())), cell(v), cell(d),
           cell(hp.d_up(0, hp.size() - 1)), cell(hp.d_down(0, hp.size() - 1)), cell(d_exact)});
    rep.results["per_k"].push_back(
        {{"K", k}, {"V01", v}, {"Dstar01", d}, {"Dstar01_with_left_limits", d_exact}});
  }
  bool monotone = true;
  for (std::size_t i = 1; i < dstar.size(); ++i) monotone &= dstar[i] >= dstar[i - 1];
  rep.results["limit_claimed"] = 2.0;
  rep.check("V01_exactly_zero", v_zero, {{"k_max", cfg.k_max}});
  rep.check("Dstar01_nondecreasing_in_K", monotone, {{"values", dstar}});
  if (cfg.k_min <= 2 && cfg.k_max >= 10) {
    const double d2 = dstar[static_cast<std::size_t>(2 - cfg.k_min)];
    const double d10 = dstar[static_cast<std::size_t>(10 - cfg.k_min)];
    rep.check("Dstar10_exceeds_Dstar2", d10 > d2, {{"Dstar2", d2}, {"Dstar10", d10}});
  }
  rep.tables = {std::move(t)};
  return rep;
}

}  // namespace shred
