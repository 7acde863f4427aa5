#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <mutex>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "shred/causal_map.hpp"
#include "shred/codec.hpp"
#include "shred/excursion.hpp"
#include "shred/io.hpp"
#include "shred/metrics.hpp"

namespace shred {

/// Runs fn(i) for i in [0, count) on up to `jobs` threads. Results must be
/// written to per-index slots. If several calls throw, the exception of the
/// lowest index is rethrown, so failures are reproducible too.
template <typename F>
void parallel_for(std::size_t count, int jobs, F&& fn) {
  const std::size_t workers =
      std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, jobs)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::size_t failed_at = count;
  std::exception_ptr failure;
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < count;) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (i < failed_at) {
          failed_at = i;
          failure = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

/// Result of one suite: a JSON summary (config, results, declared checks)
/// plus tidy tables. Contains nothing that depends on wall-clock time or on
/// the number of worker threads.
struct Report {
  std::string suite;
  nlohmann::json config = nlohmann::json::object();
  nlohmann::json results = nlohmann::json::object();
  nlohmann::json checks = nlohmann::json::array();
  std::vector<Table> tables;

  /// Records a declared threshold. `calibration` marks desk tolerances
  /// that are our own choice rather than exact statements.
  void check(const std::string& name, bool passed, const nlohmann::json& detail,
             bool calibration = false);
  bool passed() const;
  nlohmann::json to_json() const;
};

/// report.json plus one CSV per table in `dir`.
void write_report(const std::filesystem::path& dir, const Report& r);

// ---------------------------------------------------------------------------
// Exact sandwich on a single map.

struct SandwichRow {
  std::int32_t a = 0;  // map vertices
  std::int32_t b = 0;
  std::int64_t u = 0;  // walk indices
  std::int64_t v = 0;
  double v_dist = 0.0;
  std::int64_t d = 0;
  std::int64_t dstar = 0;
  std::int64_t d_up = 0;
  std::int64_t d_down = 0;
};

struct SandwichReport {
  std::vector<SandwichRow> rows;
  double max_gap = 0.0;  // max (D* - V) n^{-1/alpha}
};

/// Pairs of coded vertices: every ordered pair a < b.
std::vector<std::pair<std::int32_t, std::int32_t>> all_coded_pairs(const CausalMap& m);

/// `sources` distinct-ish random sources, `per_source` random targets each
/// (targets may repeat; a target equal to its source is redrawn when the
/// map has more than one coded vertex).
std::vector<std::pair<std::int32_t, std::int32_t>> sample_coded_pairs(
    const CausalMap& m, std::size_t sources, std::size_t per_source, Rng& rng);

/// Checks V_n <= D_n <= D*_n <= min(D^up_n, D^down_n) on the pairs and
/// throws SandwichViolation with a dump of the instance on failure.
SandwichReport discrete_sandwich(const DiscreteExcursion& e, const CausalMap& m,
                                 const std::vector<std::pair<std::int32_t, std::int32_t>>& pairs,
                                 double alpha);

// ---------------------------------------------------------------------------
// Suites.

struct GapConfig {
  double alpha = 1.5;
  std::vector<std::int64_t> ns{1000, 10000, 100000};
  std::int64_t trials = 200;
  std::int64_t pairs = 50;    // per trial
  std::int64_t sources = 10;  // pairs share sources to reuse one sweep
  std::uint64_t seed = 1;
  int jobs = 1;
  nlohmann::json to_json() const;
};
Report gap_study(const GapConfig& cfg);

struct DimensionConfig {
  double alpha = 1.5;
  std::int64_t n = 100000;
  std::int64_t maps = 10;
  std::int64_t centers = 50;  // in total, spread over the maps
  double r_min = 0.02;
  double r_max = 0.2;
  std::int64_t radii = 10;
  double eta = 0.1;
  std::vector<double> probe_eps{0.1, 0.05, 0.025};
  std::int64_t probe_points = 2000;  // per map
  std::uint64_t seed = 1;
  int jobs = 1;
  nlohmann::json to_json() const;
};
Report dimension_fit(const DimensionConfig& cfg);

struct IdentifyConfig {
  double alpha = 1.5;
  std::int64_t n = 100000;
  std::int64_t maps = 10;
  std::int64_t sources = 5;  // per map
  std::vector<double> taus{0.01, 0.02, 0.04, 0.06, 0.08, 0.1};
  double quantile = 0.5;
  double intercept_threshold = 0.05;
  std::uint64_t seed = 1;
  int jobs = 1;
  nlohmann::json to_json() const;
};
Report identification_probe(const IdentifyConfig& cfg);

struct ScalingConfig {
  double alpha = 1.5;
  std::vector<std::int64_t> ns{10000, 20000};
  std::int64_t trials = 2000;
  double ks_level = 0.01;
  double median_tolerance = 0.05;
  std::uint64_t seed = 1;
  int jobs = 1;
  nlohmann::json to_json() const;
};
Report scaling_selfconsistency(const ScalingConfig& cfg);

struct WordsConfig {
  double alpha = 1.5;
  std::int64_t walk_length = 10000;
  std::int64_t instances = 1000;
  std::vector<double> epsilons{0.05, 0.1};  // rescaled units
  std::vector<double> tail_alphas{1.5, 1.8};
  std::int64_t tail_samples = 100000;
  double tail_epsilon = 5.0;  // walk units
  std::int64_t tail_max_steps = 2000000;
  double tail_tolerance = 0.1;
  double bad_q = 0.1;
  std::vector<std::int64_t> bad_ms{20, 40, 80};
  std::int64_t bad_trials = 1000000;
  std::uint64_t seed = 1;
  int jobs = 1;
  nlohmann::json to_json() const;
};
Report words_suite(const WordsConfig& cfg);

// ---------------------------------------------------------------------------
// Deterministic counterexample: F_K = f_1 + ... + f_K with
//   f_1 = 0 on [0,1/3), 3(1 - 2t) on [1/3,2/3), 0 on [2/3,1],
//   f_{k+1}(t) = beta f_k(3t) | 0 | beta f_k(3t - 2) on the three thirds.
// Values at triadic points j / 3^K are exact integers over 3^K q^(K-1) for
// beta = p / q.

class CounterexampleProfile {
 public:
  CounterexampleProfile(std::int64_t beta_num, std::int64_t beta_den, int depth);
  /// beta rounded to the nearest fraction with denominator <= 1000.
  static CounterexampleProfile from_beta(double beta, int depth);

  int depth() const { return depth_; }
  std::int64_t beta_num() const { return p_; }
  std::int64_t beta_den() const { return q_; }
  double beta() const { return static_cast<double>(p_) / static_cast<double>(q_); }
  std::int64_t grid() const { return grid_; }  // 3^K

  /// Exact numerator of F_K(j / 3^K) (or of its left limit) over denominator().
  __int128 numerator(std::int64_t j, bool left_limit) const;
  __int128 denominator() const { return den_; }
  double value(std::int64_t j, bool left_limit) const;

  /// Up-jumps of F_K as slits, endpoints converted from exact values.
  SlitList slits() const;
  /// Line-mode samples F_K(j / 3^K) at the breakpoints only. D* over this
  /// grid is the reported D*_K(0,1); it increases with K.
  HeightProfile breakpoint_profile() const;
  /// Breakpoints plus the left limit before each jump. D* over this set is
  /// the exact value for the cadlag F_K.
  HeightProfile profile() const;

 private:
  std::int64_t p_;
  std::int64_t q_;
  int depth_;
  std::int64_t grid_;
  __int128 den_;
  std::vector<__int128> scale_;  // p^(k-1) q^(K-k) 3^(k-1) * 3 per level k
};

struct CounterexampleConfig {
  double beta = 0.55;
  int k_min = 1;
  int k_max = 10;
  nlohmann::json to_json() const;
};
Report counterexample_suite(const CounterexampleConfig& cfg);

}  // namespace shred
