#include "shred/causal_map.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include <json.hpp>

#include "shred/errors.hpp"

namespace shred {

std::size_t Layer::arc_of(double x) const {
  if (cuts.empty()) return 0;
  const auto it = std::upper_bound(cuts.begin(), cuts.end(), x,
                                   [](double v, std::int64_t c) {
                                     return v < static_cast<double>(c);
                                   });
  if (it == cuts.begin()) return cuts.size() - 1;
  return static_cast<std::size_t>(it - cuts.begin()) - 1;
}

double CausalMap::x(std::int32_t v) const {
  const std::int64_t k = walk_index(v);
  return k < 0 ? 0.0 : static_cast<double>(k) + 0.5;
}

namespace {

// Midpoints of the elementary intervals cut out by two cut lists on a circle.
std::vector<double> elementary_midpoints(const std::vector<std::int64_t>& a,
                                         const std::vector<std::int64_t>& b,
                                         double width) {
  std::vector<std::int64_t> pts;
  pts.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(pts));
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.empty()) return {0.5};
  std::vector<double> mids;
  mids.reserve(pts.size());
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    mids.push_back(0.5 * static_cast<double>(pts[i] + pts[i + 1]));
  }
  double wrap = 0.5 * (static_cast<double>(pts.back() + pts.front()) + width);
  if (wrap >= width) wrap -= width;
  mids.push_back(wrap);
  return mids;
}

}  // namespace

CausalMap build_map(const DiscreteExcursion& e) {
  CausalMap m;
  m.n_ = e.n();
  const std::int64_t top = e.max_height();
  m.max_height_ = top;
  const double width = static_cast<double>(e.n() + 1);
  m.layers_.resize(static_cast<std::size_t>(top + 2));

  const auto& s = e.steps();
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (s[k] <= 0) continue;
    const std::int64_t lo = e.height(static_cast<std::int64_t>(k));
    const std::int64_t hi = lo + s[k];
    for (std::int64_t l = lo; l < hi; ++l) {
      m.layers_[static_cast<std::size_t>(l + 1)].cuts.push_back(
          static_cast<std::int64_t>(k) + 1);
    }
  }
  for (auto& layer : m.layers_) layer.arc_vertex.assign(layer.arc_count(), -1);

  const CodedTimes ct = coded_times(e);
  const auto coded = static_cast<std::int32_t>(ct.size());
  m.walk_index_.resize(static_cast<std::size_t>(coded) + 1);
  m.level_.resize(static_cast<std::size_t>(coded) + 1);
  m.arc_.resize(static_cast<std::size_t>(coded) + 1);
  for (std::int32_t v = 0; v < coded; ++v) {
    const std::int64_t k = ct.down_index[static_cast<std::size_t>(v)];
    const std::int64_t l = e.height(k) - 1;
    Layer& layer = m.layers_[static_cast<std::size_t>(l + 1)];
    const std::size_t a = layer.arc_of(static_cast<double>(k) + 0.5);
    if (layer.arc_vertex[a] >= 0) {
      throw InternalInconsistency("two coded times in arc " + std::to_string(a) +
                                  " of slice " + std::to_string(l));
    }
    layer.arc_vertex[a] = v;
    m.walk_index_[static_cast<std::size_t>(v)] = k;
    m.level_[static_cast<std::size_t>(v)] = l;
    m.arc_[static_cast<std::size_t>(v)] = a;
  }
  const std::int32_t top_pole = coded;
  m.walk_index_[static_cast<std::size_t>(top_pole)] = -1;
  m.level_[static_cast<std::size_t>(top_pole)] = top;
  m.arc_[static_cast<std::size_t>(top_pole)] = 0;
  Layer& top_layer = m.layers_.back();
  if (!top_layer.cuts.empty()) {
    throw InternalInconsistency("a slit crosses the top slice");
  }
  top_layer.arc_vertex[0] = top_pole;
  for (std::int64_t l = -1; l <= top; ++l) {
    const Layer& layer = m.layers_[static_cast<std::size_t>(l + 1)];
    for (std::size_t a = 0; a < layer.arc_vertex.size(); ++a) {
      if (layer.arc_vertex[a] < 0) {
        throw InternalInconsistency("arc " + std::to_string(a) + " of slice " +
                                    std::to_string(l) + " holds no coded time");
      }
    }
  }

  std::vector<std::pair<std::int32_t, std::int32_t>> edges;
  for (std::int64_t l = -1; l < top; ++l) {
    const Layer& below = m.layers_[static_cast<std::size_t>(l + 1)];
    const Layer& above = m.layers_[static_cast<std::size_t>(l + 2)];
    for (double x : elementary_midpoints(below.cuts, above.cuts, width)) {
      edges.emplace_back(below.arc_vertex[below.arc_of(x)],
                         above.arc_vertex[above.arc_of(x)]);
    }
  }
  m.graph_ = Graph(coded + 1, edges);
  return m;
}

std::vector<std::int32_t> bfs_distance(const CausalMap& m, std::int32_t source) {
  return bfs(m.graph(), source);
}

Graph DualTrees::union_graph() const {
  std::vector<std::pair<std::int32_t, std::int32_t>> e;
  for (std::size_t v = 0; v < up_parent.size(); ++v) {
    if (up_parent[v] >= 0) e.emplace_back(static_cast<std::int32_t>(v), up_parent[v]);
    if (down_parent[v] >= 0) {
      e.emplace_back(static_cast<std::int32_t>(v), down_parent[v]);
    }
  }
  return Graph(static_cast<std::int32_t>(up_parent.size()), e);
}

DualTrees build_trees(const CausalMap& m) {
  const std::int32_t count = m.vertex_count();
  const double width = m.circumference();
  DualTrees t;
  t.up_parent.assign(static_cast<std::size_t>(count), -1);
  t.down_parent.assign(static_cast<std::size_t>(count), -1);
  for (std::int32_t v = 0; v < count; ++v) {
    const std::int64_t l = m.level(v);
    const Layer& own = m.layer(l);
    const std::size_t a = m.arc(v);
    if (l > -1) {
      // Just right of the arc's left end (the seam for a full circle).
      double x = own.cuts.empty() ? 0.5 : static_cast<double>(own.cuts[a]) + 0.5;
      if (x >= width) x -= width;
      const Layer& below = m.layer(l - 1);
      t.up_parent[static_cast<std::size_t>(v)] = below.arc_vertex[below.arc_of(x)];
    }
    if (l < m.max_height()) {
      // Just left of the arc's right end.
      double x = width - 0.5;
      if (!own.cuts.empty()) {
        const std::int64_t right =
            a + 1 < own.cuts.size() ? own.cuts[a + 1] : own.cuts[0];
        x = static_cast<double>(right) - 0.5;
        if (x < 0.0) x += width;
      }
      const Layer& above = m.layer(l + 1);
      t.down_parent[static_cast<std::size_t>(v)] = above.arc_vertex[above.arc_of(x)];
    }
  }
  return t;
}

void write_edges_csv(std::ostream& os, const CausalMap& m) {
  os << "u,v\n";
  for (const auto& [u, v] : m.graph().edges()) os << u << ',' << v << '\n';
}

void write_vertices_json(std::ostream& os, const CausalMap& m) {
  nlohmann::json arr = nlohmann::json::array();
  for (std::int32_t v = 0; v < m.vertex_count(); ++v) {
    arr.push_back({{"id", v}, {"x", m.x(v)}, {"y", m.y(v)},
                   {"walk_index", m.walk_index(v)}});
  }
  os << nlohmann::json{{"circumference", m.circumference()},
                       {"max_height", m.max_height()},
                       {"vertices", arr}}
            .dump(1)
     << '\n';
}

}  // namespace shred
