#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "shred/rng.hpp"

namespace shred {

/// A law on {-1, 0, 1, 2, ...}: explicit masses on a head {-1, ..., cutoff-1}
/// and an exact power tail P(X >= k) = tail_constant * k^-alpha for
/// k >= cutoff. A law without a tail has tail_constant == 0.
class StepLaw {
 public:
  StepLaw() = default;

  /// Validates masses (nonnegative, total 1 within 1e-12).
  StepLaw(double alpha, std::vector<double> probs_head, double tail_constant);

  /// Finite-support law with masses for -1, 0, 1, ... (test laws).
  static StepLaw from_head(std::vector<double> probs_head);

  double alpha() const { return alpha_; }
  const std::vector<double>& probs_head() const { return probs_head_; }
  double tail_constant() const { return tail_constant_; }
  /// First step value covered by the power tail.
  std::int64_t cutoff() const {
    return static_cast<std::int64_t>(probs_head_.size()) - 1;
  }
  bool has_tail() const { return tail_constant_ > 0.0; }

  double pmf(std::int64_t k) const;
  /// P(X >= k).
  double survival(std::int64_t k) const;
  double tail_mass() const { return tail_mass_; }
  /// Pmf of a tail value conditioned on X >= cutoff.
  double tail_conditional_pmf(std::int64_t k) const;

  double total_mass() const;
  /// Mean computed analytically, with the tail summed through zeta(alpha).
  double mean() const;

  /// Inverse-CDF draw.
  std::int64_t sample(Rng& rng) const;
  /// Draw from the tail conditioned on X >= cutoff, from a uniform v in (0,1).
  std::int64_t tail_value(double v) const;
  /// Draw a head value (X < cutoff) from u uniform on [0, 1 - tail_mass).
  std::int64_t head_value(double u) const;

  nlohmann::json to_json() const;
  static StepLaw from_json(const nlohmann::json& j);

 private:
  double alpha_ = 1.5;
  std::vector<double> probs_head_;
  double tail_constant_ = 0.0;
  double tail_mass_ = 0.0;
  std::vector<double> head_cdf_;
};

/// |Gamma(1 - alpha)|^-1, the Levy tail coefficient for alpha in (1, 2).
double levy_tail_constant(double alpha);

/// Mean-zero law with P(X >= k) = |Gamma(1-alpha)|^-1 k^-alpha for k >= 2,
/// P(X = 1) = 0, and the correction dumped into {-1, 0}.
/// Throws std::invalid_argument outside (1, 2) and InfeasibleLaw when
/// P(X = 0) would be negative.
StepLaw build_step_law(double alpha);

std::int64_t sample_step(const StepLaw& law, Rng& rng);

/// Spectrally positive alpha-stable process normalized by
/// E[exp(-lambda X_t)] = exp(t lambda^alpha).
class StableSampler {
 public:
  explicit StableSampler(double alpha);
  double alpha() const { return alpha_; }
  /// One draw of X_dt (Chambers-Mallows-Stuck, totally skewed).
  double increment(double dt, Rng& rng) const;

 private:
  double alpha_;
  double unit_scale_;  // (|cos(pi alpha / 2)|)^(1/alpha)
  double skew_shift_;  // arctan(tan(pi alpha / 2)) / alpha
  double skew_scale_;  // (1 + tan^2(pi alpha / 2))^(1/(2 alpha))
};

double sample_stable_increment(const StableSampler& s, double dt, Rng& rng);

}  // namespace shred
