#pragma once

#include <cstdint>
#include <vector>

#include "shred/rng.hpp"
#include "shred/steps.hpp"

namespace shred {

/// First-passage walk: n+1 steps >= -1, partial sums nonnegative up to
/// index n and equal to -1 at n+1.
class DiscreteExcursion {
 public:
  DiscreteExcursion() = default;
  /// Validates the first-passage property; throws std::invalid_argument.
  explicit DiscreteExcursion(std::vector<std::int64_t> steps);

  std::int64_t n() const { return static_cast<std::int64_t>(steps_.size()) - 1; }
  const std::vector<std::int64_t>& steps() const { return steps_; }
  /// E(0..n+1).
  const std::vector<std::int64_t>& heights() const { return heights_; }
  std::int64_t height(std::int64_t k) const {
    return heights_[static_cast<std::size_t>(k)];
  }
  std::int64_t max_height() const { return max_height_; }

  /// Interpolated height at a coded time k + 1/2: E(k) - 1/2.
  double coded_height(std::int64_t k) const {
    return static_cast<double>(height(k)) - 0.5;
  }

  bool operator==(const DiscreteExcursion& o) const { return steps_ == o.steps_; }

 private:
  std::vector<std::int64_t> steps_;
  std::vector<std::int64_t> heights_;
  std::int64_t max_height_ = 0;
};

/// Coded times k + 1/2 (one per down-step), stored by their index k.
struct CodedTimes {
  std::vector<std::int64_t> down_index;

  std::size_t size() const { return down_index.size(); }
  double time(std::size_t i) const {
    return static_cast<double>(down_index[i]) + 0.5;
  }
  /// Always n + 1/2 for a first-passage walk.
  double bottom() const { return time(down_index.size() - 1); }
  /// Position of the coded time k + 1/2, or -1 if k is not a down-step.
  std::int64_t position_of(std::int64_t k) const;
};

/// n+1 i.i.d. law-distributed steps conditioned on summing to -1.
/// Throws RetryBudgetExceeded after max_rounds rejected proposals.
std::vector<std::int64_t> sample_bridge(const StepLaw& law, std::int64_t n,
                                        Rng& rng,
                                        std::int64_t max_rounds = 10'000'000);

/// Rotation starting right after the first attainment of the minimal partial
/// sum; the unique rotation that is a first-passage walk.
DiscreteExcursion cycle_shift_to_excursion(const std::vector<std::int64_t>& bridge);

/// sample_bridge followed by the cycle shift.
DiscreteExcursion sample_excursion(const StepLaw& law, std::int64_t n, Rng& rng,
                                   std::int64_t max_rounds = 10'000'000);

CodedTimes coded_times(const DiscreteExcursion& e);

/// max{r in R : r <= t} when t >= min R, else max R.
double t_circ(const CodedTimes& ct, double t);

/// Cadlag step function obtained by evaluating the interpolated walk at t_circ.
double e_bar(const DiscreteExcursion& e, const CodedTimes& ct, double t);

struct Jump {
  double time;
  double bottom;
  double top;
};

/// n^{-1/alpha} E_bar(n t) on the coded-time grid, with the rescaled up-jumps.
struct RescaledExcursion {
  double alpha = 1.5;
  std::int64_t n = 0;
  double scale = 1.0;             // n^{-1/alpha}
  std::vector<double> times;      // r / n for r in R
  std::vector<double> values;     // scale * (E(k) - 1/2)
  std::vector<Jump> jumps;        // steps >= 1
  std::vector<std::int64_t> raw;  // the walk heights E(0..n+1)

  /// scale * max E.
  double peak() const;
  /// scale * E_bar(n t).
  double value_at(double t) const;
  /// Sum of jump sizes exceeding the threshold (rescaled units).
  double jump_mass_above(double threshold) const;
};

RescaledExcursion rescale(const DiscreteExcursion& e, double alpha);

}  // namespace shred
