#include "shred/metrics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <ostream>
#include <queue>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "shred/errors.hpp"

namespace shred {

template <typename T>
RangeExtrema<T>::RangeExtrema(std::vector<T> values) : size_(values.size()) {
  if (values.empty()) return;
  lo_.push_back(values);
  hi_.push_back(std::move(values));
  for (std::size_t w = 1; 2 * w <= size_; w *= 2) {
    const auto& plo = lo_.back();
    const auto& phi = hi_.back();
    std::vector<T> nlo(size_ - 2 * w + 1), nhi(size_ - 2 * w + 1);
    for (std::size_t i = 0; i < nlo.size(); ++i) {
      nlo[i] = std::min(plo[i], plo[i + w]);
      nhi[i] = std::max(phi[i], phi[i + w]);
    }
    lo_.push_back(std::move(nlo));
    hi_.push_back(std::move(nhi));
  }
}

template <typename T>
T RangeExtrema<T>::min(std::size_t i, std::size_t j) const {
  const auto level = static_cast<std::size_t>(std::bit_width(j - i + 1) - 1);
  return std::min(lo_[level][i], lo_[level][j + 1 - (std::size_t{1} << level)]);
}

template <typename T>
T RangeExtrema<T>::max(std::size_t i, std::size_t j) const {
  const auto level = static_cast<std::size_t>(std::bit_width(j - i + 1) - 1);
  return std::max(hi_[level][i], hi_[level][j + 1 - (std::size_t{1} << level)]);
}

template class RangeExtrema<std::int64_t>;
template class RangeExtrema<double>;

DiscreteTreeMetrics::DiscreteTreeMetrics(const DiscreteExcursion& e)
    : n_(e.n()),
      h_(e.heights().begin(), e.heights().end() - 1),
      ext_(h_) {}

std::int64_t DiscreteTreeMetrics::d_up(std::int64_t a, std::int64_t b) const {
  if (a == b) return 0;
  if (a > b) std::swap(a, b);
  const auto ua = static_cast<std::size_t>(a), ub = static_cast<std::size_t>(b);
  return h_[ua] + h_[ub] - 2 * ext_.min(ua + 1, ub);
}

std::int64_t DiscreteTreeMetrics::d_down(std::int64_t a, std::int64_t b) const {
  if (a == b) return 0;
  if (a > b) std::swap(a, b);
  const auto ua = static_cast<std::size_t>(a), ub = static_cast<std::size_t>(b);
  const std::int64_t inside = ext_.max(ua + 1, ub);
  std::int64_t outside = ext_.max(0, ua);
  if (b < n_) outside = std::max(outside, ext_.max(ub + 1, static_cast<std::size_t>(n_)));
  return 2 + 2 * std::min(inside, outside) - h_[ua] - h_[ub];
}

HeightProfile::HeightProfile(std::vector<double> times, std::vector<double> heights,
                             ProfileMode mode)
    : times_(std::move(times)), heights_(std::move(heights)), mode_(mode) {
  if (times_.size() != heights_.size()) {
    throw std::invalid_argument("HeightProfile: times/heights size mismatch");
  }
  if (heights_.empty()) throw std::invalid_argument("HeightProfile: empty");
  if (!std::is_sorted(times_.begin(), times_.end())) {
    throw std::invalid_argument("HeightProfile: times not sorted");
  }
  ext_ = RangeExtrema<double>(heights_);
}

double HeightProfile::d_up(std::size_t i, std::size_t j) const {
  if (i > j) std::swap(i, j);
  return heights_[i] + heights_[j] - 2.0 * ext_.min(i, j);
}

double HeightProfile::d_down(std::size_t i, std::size_t j) const {
  if (i > j) std::swap(i, j);
  double top = ext_.max(i, j);
  if (mode_ == ProfileMode::kCyclic) {
    const double outside =
        std::max(ext_.max(0, i), ext_.max(j, heights_.size() - 1));
    top = std::min(top, outside);
  }
  return 2.0 * top - heights_[i] - heights_[j];
}

GluedMetricResult glue(const HeightProfile& p, const std::vector<std::size_t>& points,
                       std::size_t budget) {
  const std::size_t m = points.size();
  if (m > budget) {
    throw PointBudgetExceeded("glue: " + std::to_string(m) +
                              " points exceed budget " + std::to_string(budget));
  }
  GluedMetricResult r;
  r.points = points;
  r.dist.assign(m * m, std::numeric_limits<double>::infinity());
  r.pred.assign(m * m, -1);
  std::vector<double> w(m * m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      w[i * m + j] = std::min(p.d_up(points[i], points[j]), p.d_down(points[i], points[j]));
    }
  }
  std::vector<char> done(m);
  for (std::size_t s = 0; s < m; ++s) {
    double* d = &r.dist[s * m];
    std::int32_t* pr = &r.pred[s * m];
    std::fill(done.begin(), done.end(), 0);
    d[s] = 0.0;
    // Dense Dijkstra: O(m^2) per source, no heap needed on a complete graph.
    for (std::size_t it = 0; it < m; ++it) {
      std::size_t u = m;
      for (std::size_t v = 0; v < m; ++v) {
        if (!done[v] && (u == m || d[v] < d[u])) u = v;
      }
      done[u] = 1;
      for (std::size_t v = 0; v < m; ++v) {
        if (done[v]) continue;
        const double nd = d[u] + w[u * m + v];
        if (nd < d[v]) {
          d[v] = nd;
          pr[v] = static_cast<std::int32_t>(u);
        }
      }
    }
  }
  return r;
}

std::vector<ChainLink> GluedMetricResult::witness(const HeightProfile& p, std::size_t i,
                                                  std::size_t j) const {
  std::vector<std::size_t> rev;
  for (std::size_t v = j; v != i; v = static_cast<std::size_t>(pred[i * size() + v])) {
    rev.push_back(v);
  }
  rev.push_back(i);
  std::vector<ChainLink> chain;
  for (auto it = rev.rbegin(); it != rev.rend(); ++it) {
    Hop hop = Hop::kUp;
    if (!chain.empty()) {
      const std::size_t a = chain.back().point, b = points[*it];
      hop = p.d_up(a, b) <= p.d_down(a, b) ? Hop::kUp : Hop::kDown;
    }
    chain.push_back({points[*it], hop});
  }
  return chain;
}

double chain_length(const HeightProfile& p, const std::vector<ChainLink>& chain) {
  double total = 0.0;
  for (std::size_t k = 1; k < chain.size(); ++k) {
    const std::size_t a = chain[k - 1].point, b = chain[k].point;
    total += chain[k].hop == Hop::kUp ? p.d_up(a, b) : p.d_down(a, b);
  }
  return total;
}

WeightedTree cartesian_tree(const std::vector<double>& h, double sign) {
  const std::size_t n = h.size();
  WeightedTree t;
  t.parent.assign(n, -1);
  t.weight.assign(n, 0.0);
  // Nearest left index with g <= g_i and nearest right with g < g_i.
  std::vector<std::int64_t> left(n, -1), right(n, -1), stack;
  for (std::size_t i = 0; i < n; ++i) {
    const double g = sign * h[i];
    while (!stack.empty() && sign * h[static_cast<std::size_t>(stack.back())] > g) {
      stack.pop_back();
    }
    left[i] = stack.empty() ? -1 : stack.back();
    stack.push_back(static_cast<std::int64_t>(i));
  }
  stack.clear();
  for (std::size_t k = n; k-- > 0;) {
    const double g = sign * h[k];
    while (!stack.empty() && sign * h[static_cast<std::size_t>(stack.back())] >= g) {
      stack.pop_back();
    }
    right[k] = stack.empty() ? -1 : stack.back();
    stack.push_back(static_cast<std::int64_t>(k));
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::int64_t p = -1;
    if (left[i] < 0) {
      p = right[i];
    } else if (right[i] < 0) {
      p = left[i];
    } else {
      // The higher of the two; ties go right (the left one is an ancestor).
      const double gl = sign * h[static_cast<std::size_t>(left[i])];
      const double gr = sign * h[static_cast<std::size_t>(right[i])];
      p = gl > gr ? left[i] : right[i];
    }
    t.parent[i] = p;
    if (p >= 0) t.weight[i] = sign * (h[i] - h[static_cast<std::size_t>(p)]);
  }
  return t;
}

std::vector<double> dstar_from(const HeightProfile& p, std::size_t source) {
  const auto& h = p.heights();
  const std::size_t n = h.size();
  struct Arc {
    std::size_t to;
    double w;
  };
  std::vector<std::vector<Arc>> adj(n);
  auto add_tree = [&](const WeightedTree& t, const std::vector<std::size_t>& ids) {
    for (std::size_t i = 0; i < t.parent.size(); ++i) {
      if (t.parent[i] < 0) continue;
      const std::size_t a = ids[i], b = ids[static_cast<std::size_t>(t.parent[i])];
      adj[a].push_back({b, t.weight[i]});
      adj[b].push_back({a, t.weight[i]});
    }
  };
  std::vector<std::size_t> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = i;
  add_tree(cartesian_tree(h, 1.0), ids);
  if (p.mode() == ProfileMode::kLine) {
    add_tree(cartesian_tree(h, -1.0), ids);
  } else {
    // Cyclic d_down is the line d_down of the sequence rotated to start at
    // the global maximum.
    const std::size_t g = static_cast<std::size_t>(
        std::max_element(h.begin(), h.end()) - h.begin());
    std::vector<double> rot(n);
    for (std::size_t i = 0; i < n; ++i) {
      ids[i] = (g + i) % n;
      rot[i] = h[ids[i]];
    }
    add_tree(cartesian_tree(rot, -1.0), ids);
  }
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[source] = 0.0;
  pq.emplace(0.0, source);
  while (!pq.empty()) {
    const auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[u]) continue;
    for (const Arc& a : adj[u]) {
      const double nd = d + a.w;
      if (nd < dist[a.to]) {
        dist[a.to] = nd;
        pq.emplace(nd, a.to);
      }
    }
  }
  return dist;
}

void write_distance_csv(std::ostream& os, const GluedMetricResult& r,
                        const HeightProfile& p, const std::string& label) {
  nlohmann::json head{{"label", label},
                      {"mode", p.mode() == ProfileMode::kLine ? "line" : "cyclic"},
                      {"points", r.points}};
  os << "# " << head.dump() << '\n';
  os << "i,j,time_i,time_j,dstar\n";
  os.precision(17);
  for (std::size_t i = 0; i < r.size(); ++i) {
    for (std::size_t j = 0; j < r.size(); ++j) {
      os << r.points[i] << ',' << r.points[j] << ',' << p.times()[r.points[i]] << ','
         << p.times()[r.points[j]] << ',' << r.at(i, j) << '\n';
    }
  }
}

}  // namespace shred
