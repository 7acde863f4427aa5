#include "shred/heightvar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

namespace shred {

double PLValueFunction::operator()(double y) const {
  auto it = pts_.upper_bound(y);
  if (it == pts_.begin()) return it->second + (it->first - y);
  auto prev = std::prev(it);
  if (it == pts_.end()) return prev->second + (y - prev->first);
  const double w = (y - prev->first) / (it->first - prev->first);
  return prev->second + w * (it->second - prev->second);
}

double PLValueFunction::apply_gate(double a, double b) {
  const double fa = (*this)(a);
  const double fb = (*this)(b);
  double apex = 0.5 * (fb - fa + a + b);
  apex = std::clamp(apex, a, b);
  const double peak = fa + (apex - a);
  pts_.erase(pts_.upper_bound(a), pts_.lower_bound(b));
  pts_[a] = fa;
  pts_[b] = fb;
  if (apex > a && apex < b) pts_[apex] = peak;
  return apex;
}

double PLValueFunction::max_slope() const {
  double m = 1.0;
  for (auto it = pts_.begin(); std::next(it) != pts_.end(); ++it) {
    const auto nx = std::next(it);
    if (nx->first - it->first < 1e-9) continue;  // rounding-level spans
    m = std::max(m, std::abs(nx->second - it->second) / (nx->first - it->first));
  }
  return m;
}

VResult v_through_gates(const std::vector<Gate>& gates, double s, double t, double hs,
                        double ht, bool want_witness) {
  PLValueFunction f(hs);
  std::vector<double> apex(gates.size());
  for (std::size_t i = 0; i < gates.size(); ++i) {
    apex[i] = f.apply_gate(gates[i].a, gates[i].b);
  }
  VResult r;
  r.value = f(ht);
  r.rightward = s <= t;
  r.gates = gates;
  r.sides.resize(gates.size());
  // Backtrack: inside a gate's interval the path crossed at whichever end
  // the tent attributes y to, then moved vertically.
  std::vector<VPoint> rev;
  double y = ht;
  if (want_witness) rev.push_back({t, ht});
  for (std::size_t i = gates.size(); i-- > 0;) {
    const Gate& g = gates[i];
    if (y > g.a && y < g.b) {
      const double cross = y <= apex[i] ? g.a : g.b;
      if (want_witness) {
        rev.push_back({g.x, y});
        rev.push_back({g.x, cross});
      }
      y = cross;
    }
    r.sides[i] = y <= g.a ? Side::kBelow : Side::kAbove;
  }
  if (want_witness) {
    rev.push_back({s, y});
    rev.push_back({s, hs});
    // Drop repeated points.
    for (auto it = rev.rbegin(); it != rev.rend(); ++it) {
      if (r.witness.empty() || r.witness.back().x != it->x || r.witness.back().y != it->y) {
        r.witness.push_back(*it);
      }
    }
  }
  return r;
}

namespace {

// Blocking gates at offsets in (0, len) from s, walking right or left, in
// traversal order. On the line there is no wrap.
std::vector<Gate> gates_from(const SlitList& sl, double s, double len, bool right,
                             bool cyclic) {
  const double w = sl.circumference;
  std::vector<std::pair<double, Gate>> tmp;
  for (const Slit& z : sl.slits) {
    if (!z.blocking()) continue;
    double off = right ? z.x - s : s - z.x;
    if (cyclic) {
      if (off < 0) off += w;
      if (off >= w) off -= w;
    }
    if (off > 0.0 && off < len) {
      tmp.push_back({off, {right ? s + off : s - off, z.bottom, z.top}});
    }
  }
  std::stable_sort(tmp.begin(), tmp.end(),
                   [](const auto& p, const auto& q) { return p.first < q.first; });
  std::vector<Gate> g;
  g.reserve(tmp.size());
  for (auto& p : tmp) g.push_back(p.second);
  return g;
}

}  // namespace

VResult v_distance(const SlitList& slits, double s, double t, double hs, double ht,
                   VMode mode, bool want_witness) {
  if (s == t) {
    VResult r;
    r.value = std::abs(hs - ht);
    if (want_witness) r.witness = {{s, hs}, {t, ht}};
    if (want_witness && hs == ht) r.witness.pop_back();
    return r;
  }
  if (mode == VMode::kLine) {
    const bool right = s < t;
    return v_through_gates(gates_from(slits, s, std::abs(t - s), right, false), s, t, hs,
                           ht, want_witness);
  }
  const double w = slits.circumference;
  double right = t - s;
  if (right < 0) right += w;
  const double left = w - right;
  VResult r1 = v_through_gates(gates_from(slits, s, right, true, true), s, s + right, hs,
                               ht, want_witness);
  VResult r2 = v_through_gates(gates_from(slits, s, left, false, true), s, s - left, hs,
                               ht, want_witness);
  r1.rightward = true;
  r2.rightward = false;
  return r2.value < r1.value ? r2 : r1;
}

std::vector<double> v_from(const SlitList& slits, double s, double hs,
                           const std::vector<VTarget>& targets, VMode mode) {
  const double w = slits.circumference;
  const std::size_t m = targets.size();
  std::vector<double> best(m, std::numeric_limits<double>::infinity());
  for (int dir = 0; dir < 2; ++dir) {
    const bool right = dir == 0;
    std::vector<double> off(m);
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < m; ++i) {
      const double dx = right ? targets[i].x - s : s - targets[i].x;
      if (mode == VMode::kLine) {
        if (dx < 0.0 || (dx == 0.0 && !right)) continue;
        off[i] = dx;
      } else {
        off[i] = dx < 0 ? dx + w : dx;
        if (off[i] >= w) off[i] -= w;
      }
      order.push_back(i);
    }
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return off[a] < off[b]; });
    const double span = mode == VMode::kLine
                            ? std::numeric_limits<double>::infinity()
                            : w;
    const std::vector<Gate> gates =
        gates_from(slits, s, span, right, mode == VMode::kCylinder);
    // Offsets of the gates in the same frame.
    PLValueFunction f(hs);
    std::size_t gi = 0;
    for (std::size_t i : order) {
      while (gi < gates.size()) {
        const double goff = right ? gates[gi].x - s : s - gates[gi].x;
        if (goff >= off[i]) break;
        f.apply_gate(gates[gi].a, gates[gi].b);
        ++gi;
      }
      best[i] = std::min(best[i], off[i] == 0.0 ? std::abs(hs - targets[i].h)
                                                : f(targets[i].h));
    }
  }
  return best;
}

double variation(const std::vector<VPoint>& path) {
  double v = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) v += std::abs(path[i].y - path[i - 1].y);
  return v;
}

bool crosses_slits(const std::vector<VPoint>& path, const std::vector<Gate>& gates) {
  for (const Gate& g : gates) {
    for (std::size_t i = 1; i < path.size(); ++i) {
      const VPoint& p = path[i - 1];
      const VPoint& q = path[i];
      const double lo = std::min(p.x, q.x), hi = std::max(p.x, q.x);
      if (lo < g.x && g.x < hi) {
        // Horizontal segments only appear between vertical moves.
        const double y = p.y + (q.y - p.y) * (g.x - p.x) / (q.x - p.x);
        if (y > g.a && y < g.b) return true;
      }
    }
  }
  return false;
}

double v_on_walk(const DiscreteExcursion& e, const SlitList& slits, std::int64_t u,
                 std::int64_t v) {
  return v_distance(slits, static_cast<double>(u) + 0.5, static_cast<double>(v) + 0.5,
                    e.coded_height(u), e.coded_height(v), VMode::kCylinder, false)
      .value;
}

std::vector<ZeroPair> v_zero_classes(const SlitList& slits, const HeightProfile& profile,
                                     double tolerance,
                                     const std::vector<std::size_t>& sources) {
  std::vector<std::size_t> src = sources;
  if (src.empty()) {
    src.resize(profile.size());
    std::iota(src.begin(), src.end(), std::size_t{0});
  }
  std::vector<VTarget> targets(profile.size());
  for (std::size_t i = 0; i < profile.size(); ++i) {
    targets[i] = {profile.times()[i], profile.heights()[i]};
  }
  const VMode mode =
      profile.mode() == ProfileMode::kLine ? VMode::kLine : VMode::kCylinder;
  std::vector<ZeroPair> out;
  for (std::size_t s : src) {
    const auto vals = v_from(slits, targets[s].x, targets[s].h, targets, mode);
    for (std::size_t t = 0; t < vals.size(); ++t) {
      if (vals[t] <= tolerance) {
        out.push_back({s, t, vals[t], profile.d_up(s, t), profile.d_down(s, t)});
      }
    }
  }
  return out;
}

void write_witness_csv(std::ostream& os, const VResult& r) {
  os << "x,y\n";
  os.precision(17);
  for (const auto& p : r.witness) os << p.x << ',' << p.y << '\n';
}

}  // namespace shred
