#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "shred/codec.hpp"
#include "shred/heightvar.hpp"
#include "shred/metrics.hpp"
#include "shred/rng.hpp"
#include "shred/steps.hpp"

namespace shred {

/// Unconditioned walk read as a cadlag process on [0, N]: on [k, k+1) it
/// decreases linearly for a -1 step and is flat otherwise, then jumps to
/// X_{k+1} at time k+1. It has no negative jumps and every level crossed
/// downward is hit at an integer time.
struct LineWalk {
  std::vector<std::int64_t> x;  // X_0 .. X_N

  std::int64_t length() const { return static_cast<std::int64_t>(x.size()) - 1; }
  /// Up-jumps as slits {k+1} x [X_k, X_{k+1}].
  SlitList slits() const;
  /// Integer-time samples, line mode.
  HeightProfile profile() const;
};

LineWalk sample_line_walk(const StepLaw& law, std::int64_t length, Rng& rng);
LineWalk line_walk_from_steps(const std::vector<std::int64_t>& steps);

struct ExplorationTrace {
  double epsilon = 0.0;
  std::string word;
  std::vector<std::int64_t> S;
  std::vector<std::int64_t> T;
  std::vector<double> chi;  // one per letter b, in order
  bool truncated = false;

  std::int64_t count_h() const;
  std::int64_t count_b() const;
  double chi_sum() const;
  nlohmann::json to_json() const;
};

/// Stopping times along a fixed word. Stops early (truncated = true) if a
/// stopping time does not resolve inside the walk.
ExplorationTrace explore_word(const LineWalk& w, double epsilon, const std::string& word);

/// Reads the letters off the optimal path's side word: the exploration stops
/// at the first k with S_{k+1} >= t. Throws AmbiguousSide if an explored
/// jump is missing from the witness.
ExplorationTrace word_of_optimal_path(const LineWalk& w, std::int64_t t, double epsilon,
                                      const VResult& witness);

struct ExplorationBoundsReport {
  double dstar = 0.0;
  double v = 0.0;
  double upper_slack = 0.0;  // V + 2 eps #b + 2 eps - D*
  double lower_slack = 0.0;  // V - eps #h - eps sum chi
};

/// Throws InequalityViolation when either inequality fails by more than tol.
ExplorationBoundsReport check_exploration_bounds(const ExplorationTrace& trace, double v_value,
                            double dstar_value, double epsilon, double tol = 1e-9);

/// One instance of the exploration-bounds check on the walk's interval [0, t].
struct BoundsInstance {
  ExplorationTrace trace;
  ExplorationBoundsReport report;
};
BoundsInstance exploration_bounds_instance(const LineWalk& w, std::int64_t t, double epsilon);

/// Independent first-passage runs above epsilon (walk units) started at 0;
/// each returns chi = -X_{S-} / epsilon. Runs longer than max_steps are
/// censored and reported as +infinity.
std::vector<double> sample_underjumps(const StepLaw& law, double epsilon,
                                      std::size_t count, Rng& rng,
                                      std::int64_t max_steps);

struct TailFit {
  double beta = 0.0;        // minus the log-log slope
  double log_c = 0.0;       // intercept
  double r_squared = 0.0;
  std::size_t samples = 0;
  std::size_t censored = 0;
  std::vector<double> r;
  std::vector<double> survival;
};

/// Least squares of log P(chi > r) on log(r + 1) over a log-spaced grid in
/// [r_min, r_max].
TailFit fit_underjump_tail(const std::vector<double>& chi, double r_min = 1.0,
                           double r_max = 100.0, std::size_t grid = 40);

struct BadWordPoint {
  std::int64_t m = 0;
  double log_prob = 0.0;      // importance-sampling estimate
  double rel_error = 0.0;     // standard error / estimate
  double log_prob_lower = 0.0;  // grid convolution bracket
  double log_prob_upper = 0.0;
  double theta = 0.0;         // tilt used
};

struct BadWordFit {
  double q = 0.0;
  std::vector<BadWordPoint> points;
  double slope = 0.0;  // of log P against m
};

/// P(chi_1 + ... + chi_m <= q m) under the empirical law of the pool
/// (finite samples only), estimated by exponentially tilted Monte Carlo with
/// `trials` draws per m, plus a deterministic grid-convolution bracket.
BadWordFit badword_decay(const std::vector<double>& pool, double q,
                         const std::vector<std::int64_t>& ms, std::int64_t trials,
                         Rng& rng);

}  // namespace shred
