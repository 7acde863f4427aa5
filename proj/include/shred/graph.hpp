#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace shred {

/// Undirected simple graph in compressed sparse row form.
class Graph {
 public:
  Graph() = default;
  /// Builds from an edge list; loops dropped, parallel edges collapsed,
  /// neighbor lists sorted.
  Graph(std::int32_t vertex_count,
        const std::vector<std::pair<std::int32_t, std::int32_t>>& edges);

  std::int32_t size() const { return static_cast<std::int32_t>(offsets_.size()) - 1; }
  std::size_t edge_count() const { return adj_.size() / 2; }
  std::span<const std::int32_t> neighbors(std::int32_t v) const {
    return {adj_.data() + offsets_[static_cast<std::size_t>(v)],
            adj_.data() + offsets_[static_cast<std::size_t>(v) + 1]};
  }
  bool has_edge(std::int32_t u, std::int32_t v) const;
  std::vector<std::pair<std::int32_t, std::int32_t>> edges() const;

 private:
  std::vector<std::int64_t> offsets_{0};
  std::vector<std::int32_t> adj_;
};

/// Hop distances from source; -1 for unreachable vertices.
std::vector<std::int32_t> bfs(const Graph& g, std::int32_t source);

/// BFS distances plus the BFS parent of every reached vertex (-1 at source).
std::pair<std::vector<std::int32_t>, std::vector<std::int32_t>> bfs_with_parents(
    const Graph& g, std::int32_t source);

/// Graph whose edges are {v, parent[v]} for parent[v] >= 0.
Graph graph_of_parents(const std::vector<std::int32_t>& parent);

}  // namespace shred
