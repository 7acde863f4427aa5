#include "shred/graph.hpp"

#include <algorithm>
#include <stdexcept>

namespace shred {

Graph::Graph(std::int32_t vertex_count,
             const std::vector<std::pair<std::int32_t, std::int32_t>>& edges) {
  offsets_.assign(static_cast<std::size_t>(vertex_count) + 1, 0);
  for (const auto& [u, v] : edges) {
    if (u < 0 || v < 0 || u >= vertex_count || v >= vertex_count) {
      throw std::out_of_range("Graph: edge endpoint out of range");
    }
    if (u == v) continue;
    ++offsets_[static_cast<std::size_t>(u) + 1];
    ++offsets_[static_cast<std::size_t>(v) + 1];
  }
  for (std::size_t i = 1; i < offsets_.size(); ++i) offsets_[i] += offsets_[i - 1];
  std::vector<std::int32_t> raw(static_cast<std::size_t>(offsets_.back()));
  std::vector<std::int64_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (const auto& [u, v] : edges) {
    if (u == v) continue;
    raw[static_cast<std::size_t>(fill[static_cast<std::size_t>(u)]++)] = v;
    raw[static_cast<std::size_t>(fill[static_cast<std::size_t>(v)]++)] = u;
  }
  // Sort and dedupe each row, compacting in place.
  std::vector<std::int64_t> compact(offsets_.size(), 0);
  std::size_t out = 0;
  for (std::size_t v = 0; v + 1 < offsets_.size(); ++v) {
    auto first = raw.begin() + offsets_[v];
    auto last = raw.begin() + offsets_[v + 1];
    std::sort(first, last);
    last = std::unique(first, last);
    for (auto it = first; it != last; ++it) raw[out++] = *it;
    compact[v + 1] = static_cast<std::int64_t>(out);
  }
  raw.resize(out);
  adj_ = std::move(raw);
  offsets_ = std::move(compact);
}

bool Graph::has_edge(std::int32_t u, std::int32_t v) const {
  const auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<std::pair<std::int32_t, std::int32_t>> Graph::edges() const {
  std::vector<std::pair<std::int32_t, std::int32_t>> e;
  for (std::int32_t u = 0; u < size(); ++u) {
    for (std::int32_t v : neighbors(u)) {
      if (u < v) e.emplace_back(u, v);
    }
  }
  return e;
}

std::pair<std::vector<std::int32_t>, std::vector<std::int32_t>> bfs_with_parents(
    const Graph& g, std::int32_t source) {
  std::vector<std::int32_t> dist(static_cast<std::size_t>(g.size()), -1);
  std::vector<std::int32_t> parent(static_cast<std::size_t>(g.size()), -1);
  std::vector<std::int32_t> queue;
  queue.reserve(static_cast<std::size_t>(g.size()));
  dist[static_cast<std::size_t>(source)] = 0;
  queue.push_back(source);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::int32_t u = queue[head];
    for (std::int32_t v : g.neighbors(u)) {
      if (dist[static_cast<std::size_t>(v)] < 0) {
        dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
        parent[static_cast<std::size_t>(v)] = u;
        queue.push_back(v);
      }
    }
  }
  return {std::move(dist), std::move(parent)};
}

std::vector<std::int32_t> bfs(const Graph& g, std::int32_t source) {
  return bfs_with_parents(g, source).first;
}

Graph graph_of_parents(const std::vector<std::int32_t>& parent) {
  std::vector<std::pair<std::int32_t, std::int32_t>> e;
  for (std::size_t v = 0; v < parent.size(); ++v) {
    if (parent[v] >= 0) e.emplace_back(static_cast<std::int32_t>(v), parent[v]);
  }
  return Graph(static_cast<std::int32_t>(parent.size()), e);
}

}  // namespace shred
