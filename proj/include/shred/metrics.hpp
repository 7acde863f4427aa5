#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "shred/excursion.hpp"

namespace shred {

/// O(1) range-min and range-max over a fixed array (sparse tables).
template <typename T>
class RangeExtrema {
 public:
  RangeExtrema() = default;
  explicit RangeExtrema(std::vector<T> values);

  std::size_t size() const { return size_; }
  /// Inclusive index range, i <= j.
  T min(std::size_t i, std::size_t j) const;
  T max(std::size_t i, std::size_t j) const;

 private:
  std::size_t size_ = 0;
  std::vector<std::vector<T>> lo_;
  std::vector<std::vector<T>> hi_;
};

extern template class RangeExtrema<std::int64_t>;
extern template class RangeExtrema<double>;

/// Discrete tree metrics between coded times, in terms of walk indices a, b
/// (coded times a + 1/2, b + 1/2), with extrema over integer walk points:
///   up:   E(a) + E(b) - 2 min E[a+1..b]
///   down: 2 + 2 min(max E[a+1..b], max E[0..a] u E[b+1..n]) - E(a) - E(b)
/// for a < b, and 0 for a == b.
class DiscreteTreeMetrics {
 public:
  explicit DiscreteTreeMetrics(const DiscreteExcursion& e);
  std::int64_t d_up(std::int64_t a, std::int64_t b) const;
  std::int64_t d_down(std::int64_t a, std::int64_t b) const;

 private:
  std::int64_t n_;
  std::vector<std::int64_t> h_;
  RangeExtrema<std::int64_t> ext_;
};

enum class ProfileMode { kCyclic, kLine };

/// Heights sampled at sorted times. In cyclic mode the sequence is read on a
/// circle (excursion profiles); in line mode on an interval.
class HeightProfile {
 public:
  HeightProfile(std::vector<double> times, std::vector<double> heights,
                ProfileMode mode);

  std::size_t size() const { return heights_.size(); }
  ProfileMode mode() const { return mode_; }
  const std::vector<double>& times() const { return times_; }
  const std::vector<double>& heights() const { return heights_; }

  /// h_i + h_j - 2 min over the samples between i and j.
  double d_up(std::size_t i, std::size_t j) const;
  /// Line: 2 max inside - h_i - h_j. Cyclic: 2 min(max inside, max outside)
  /// - h_i - h_j, where both arcs include i and j.
  double d_down(std::size_t i, std::size_t j) const;

 private:
  std::vector<double> times_;
  std::vector<double> heights_;
  ProfileMode mode_;
  RangeExtrema<double> ext_;
};

enum class Hop { kUp, kDown };

struct ChainLink {
  std::size_t point;  // index into the profile
  Hop hop;            // metric used to reach this point from the previous one
};

/// Shortest-path closure of min(d_up, d_down) over a point set.
struct GluedMetricResult {
  std::vector<std::size_t> points;
  std::vector<double> dist;        // row-major |points|^2
  std::vector<std::int32_t> pred;  // predecessor (point position) per source

  std::size_t size() const { return points.size(); }
  double at(std::size_t i, std::size_t j) const { return dist[i * size() + j]; }
  /// Chain from points[i] to points[j]; first link is points[i] itself.
  std::vector<ChainLink> witness(const HeightProfile& p, std::size_t i,
                                 std::size_t j) const;
};

/// Dijkstra from every point over the implicit complete graph.
/// Throws PointBudgetExceeded when |points| > budget.
GluedMetricResult glue(const HeightProfile& p, const std::vector<std::size_t>& points,
                       std::size_t budget = 4096);

/// Value of a chain: the sum of its hops.
double chain_length(const HeightProfile& p, const std::vector<ChainLink>& chain);

/// D* from one sample to all samples, using all samples as chain points.
/// Exact shortest paths on the union of the two trees realizing d_up and
/// d_down (Cartesian trees of h and -h), O(N log N).
std::vector<double> dstar_from(const HeightProfile& p, std::size_t source);

/// Parent arrays and edge weights of the tree realizing d_up (sign = +1) or
/// the line-mode d_down (sign = -1) on a height sequence.
struct WeightedTree {
  std::vector<std::int64_t> parent;  // -1 at the root
  std::vector<double> weight;        // edge to parent
};
WeightedTree cartesian_tree(const std::vector<double>& h, double sign);

/// CSV with a one-line JSON header comment naming points and mode.
void write_distance_csv(std::ostream& os, const GluedMetricResult& r,
                        const HeightProfile& p, const std::string& label);

}  // namespace shred
