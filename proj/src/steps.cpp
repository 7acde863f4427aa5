#include "shred/steps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

#include "shred/errors.hpp"

namespace shred {

namespace {

constexpr double kMassTolerance = 1e-12;

// Largest tail draw we return; keeps sums of n steps inside int64.
constexpr double kTailClamp = 0x1.0p60;

}  // namespace

double levy_tail_constant(double alpha) {
  return 1.0 / std::abs(std::tgamma(1.0 - alpha));
}

StepLaw::StepLaw(double alpha, std::vector<double> probs_head,
                 double tail_constant)
    : alpha_(alpha),
      probs_head_(std::move(probs_head)),
      tail_constant_(tail_constant) {
  if (probs_head_.empty()) {
    throw std::invalid_argument("StepLaw: empty head");
  }
  if (tail_constant_ < 0.0) {
    throw std::invalid_argument("StepLaw: negative tail constant");
  }
  if (tail_constant_ > 0.0 && !(alpha_ > 0.0)) {
    throw std::invalid_argument("StepLaw: tail requires alpha > 0");
  }
  for (double p : probs_head_) {
    if (!(p >= 0.0)) {
      throw std::invalid_argument("StepLaw: negative probability");
    }
  }
  if (tail_constant_ > 0.0) {
    const auto k0 = static_cast<double>(cutoff());
    if (k0 < 1.0) {
      throw std::invalid_argument("StepLaw: tail must start at k >= 1");
    }
    tail_mass_ = tail_constant_ * std::pow(k0, -alpha_);
  }
  if (std::abs(total_mass() - 1.0) > kMassTolerance) {
    throw std::invalid_argument("StepLaw: total mass " +
                                std::to_string(total_mass()) + " != 1");
  }
  head_cdf_.resize(probs_head_.size());
  std::partial_sum(probs_head_.begin(), probs_head_.end(), head_cdf_.begin());
}

StepLaw StepLaw::from_head(std::vector<double> probs_head) {
  return StepLaw(2.0, std::move(probs_head), 0.0);
}

double StepLaw::pmf(std::int64_t k) const {
  if (k < -1) return 0.0;
  if (k < cutoff()) return probs_head_[static_cast<std::size_t>(k + 1)];
  if (!has_tail()) return 0.0;
  const auto kd = static_cast<double>(k);
  return tail_constant_ * (std::pow(kd, -alpha_) - std::pow(kd + 1.0, -alpha_));
}

double StepLaw::survival(std::int64_t k) const {
  if (k >= cutoff()) {
    return has_tail() ? tail_constant_ * std::pow(static_cast<double>(k), -alpha_)
                      : 0.0;
  }
  double s = tail_mass_;
  for (std::int64_t j = std::max<std::int64_t>(k, -1); j < cutoff(); ++j) {
    s += probs_head_[static_cast<std::size_t>(j + 1)];
  }
  return s;
}

double StepLaw::tail_conditional_pmf(std::int64_t k) const {
  if (!has_tail() || k < cutoff()) return 0.0;
  const auto ratio = static_cast<double>(k) / static_cast<double>(cutoff());
  const auto next = static_cast<double>(k + 1) / static_cast<double>(cutoff());
  return std::pow(ratio, -alpha_) - std::pow(next, -alpha_);
}

double StepLaw::total_mass() const {
  return std::accumulate(probs_head_.begin(), probs_head_.end(), 0.0) +
         tail_mass_;
}

double StepLaw::mean() const {
  double m = 0.0;
  for (std::size_t i = 0; i < probs_head_.size(); ++i) {
    m += (static_cast<double>(i) - 1.0) * probs_head_[i];
  }
  if (has_tail()) {
    // sum_{k>=k0} k mu_k = (k0 - 1) S(k0) + sum_{k>=k0} S(k),
    // and sum_{k>=k0} k^-alpha = zeta(alpha) - sum_{k<k0} k^-alpha.
    const std::int64_t k0 = cutoff();
    double hurwitz = std::riemann_zeta(alpha_);
    for (std::int64_t k = 1; k < k0; ++k) {
      hurwitz -= std::pow(static_cast<double>(k), -alpha_);
    }
    m += static_cast<double>(k0 - 1) * tail_mass_ + tail_constant_ * hurwitz;
  }
  return m;
}

std::int64_t StepLaw::tail_value(double v) const {
  // P(J >= k | J >= k0) = (k / k0)^-alpha, so J = ceil(k0 v^(-1/alpha)) - 1.
  const double x = static_cast<double>(cutoff()) * std::pow(v, -1.0 / alpha_);
  if (x >= kTailClamp) return static_cast<std::int64_t>(kTailClamp);
  const auto j = static_cast<std::int64_t>(std::ceil(x)) - 1;
  return std::max(j, cutoff());
}

std::int64_t StepLaw::head_value(double u) const {
  const auto it = std::upper_bound(head_cdf_.begin(), head_cdf_.end(), u);
  auto idx = static_cast<std::int64_t>(it - head_cdf_.begin());
  // Rounding at the top of the cdf: fall back to the last atom with mass.
  while (idx >= static_cast<std::int64_t>(probs_head_.size()) ||
         probs_head_[static_cast<std::size_t>(idx)] == 0.0) {
    if (idx >= static_cast<std::int64_t>(probs_head_.size())) {
      idx = static_cast<std::int64_t>(probs_head_.size()) - 1;
    } else {
      --idx;
    }
  }
  return idx - 1;
}

std::int64_t StepLaw::sample(Rng& rng) const {
  const double u = rng.uniform_open();
  if (u < tail_mass_) return tail_value(u / tail_mass_);
  return head_value(u - tail_mass_);
}

nlohmann::json StepLaw::to_json() const {
  return {{"alpha", alpha_},
          {"probs_head", probs_head_},
          {"tail_constant", tail_constant_},
          {"cutoff", cutoff()}};
}

StepLaw StepLaw::from_json(const nlohmann::json& j) {
  StepLaw law(j.at("alpha").get<double>(),
              j.at("probs_head").get<std::vector<double>>(),
              j.at("tail_constant").get<double>());
  if (j.contains("cutoff") && j.at("cutoff").get<std::int64_t>() != law.cutoff()) {
    throw std::invalid_argument("StepLaw: cutoff does not match head length");
  }
  return law;
}

StepLaw build_step_law(double alpha) {
  if (!(alpha > 1.0 && alpha < 2.0)) {
    throw std::invalid_argument("build_step_law: alpha must lie in (1, 2)");
  }
  const double c = levy_tail_constant(alpha);
  const double tail2 = c * std::pow(2.0, -alpha);
  // Mean zero: mu_{-1} = sum_{k>=1} P(X >= k) = S(1) + c (zeta(alpha) - 1),
  // with S(1) = S(2) since P(X = 1) = 0.
  const double down = tail2 + c * (std::riemann_zeta(alpha) - 1.0);
  const double zero = 1.0 - down - tail2;
  if (zero < 0.0) {
    throw InfeasibleLaw("build_step_law: alpha=" + std::to_string(alpha) +
                        " needs mu_-1=" + std::to_string(down) +
                        " plus tail mass " + std::to_string(tail2) +
                        ", exceeding the unit budget by " +
                        std::to_string(-zero));
  }
  return StepLaw(alpha, {down, zero, 0.0}, c);
}

std::int64_t sample_step(const StepLaw& law, Rng& rng) {
  return law.sample(rng);
}

StableSampler::StableSampler(double alpha) : alpha_(alpha) {
  if (!(alpha > 1.0 && alpha < 2.0)) {
    throw std::invalid_argument("StableSampler: alpha must lie in (1, 2)");
  }
  const double half_angle = std::numbers::pi * alpha / 2.0;
  const double t = std::tan(half_angle);
  unit_scale_ = std::pow(std::abs(std::cos(half_angle)), 1.0 / alpha);
  skew_shift_ = std::atan(t) / alpha;
  skew_scale_ = std::pow(1.0 + t * t, 1.0 / (2.0 * alpha));
}

double StableSampler::increment(double dt, Rng& rng) const {
  if (!(dt > 0.0)) throw std::invalid_argument("StableSampler: dt must be > 0");
  const double v = std::numbers::pi * (rng.uniform_open() - 0.5);
  const double w = -std::log(rng.uniform_open());
  const double a = alpha_;
  const double arg = a * (v + skew_shift_);
  const double x = skew_scale_ * std::sin(arg) / std::pow(std::cos(v), 1.0 / a) *
                   std::pow(std::cos(v - arg) / w, (1.0 - a) / a);
  // S_alpha(1, 1, 0) has E exp(-lambda X) = exp(lambda^a / |cos(pi a / 2)|).
  return std::pow(dt, 1.0 / a) * unit_scale_ * x;
}

double sample_stable_increment(const StableSampler& s, double dt, Rng& rng) {
  return s.increment(dt, rng);
}

}  // namespace shred
