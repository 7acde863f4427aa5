#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "shred/excursion.hpp"
#include "shred/graph.hpp"

namespace shred {

/// One horizontal slice (l, l+1) of the cylinder: cut positions of the slits
/// crossing it and the vertex sitting in each arc between consecutive cuts.
/// Arc j spans (cuts[j], cuts[j+1]); the last arc wraps through the seam.
struct Layer {
  std::vector<std::int64_t> cuts;
  std::vector<std::int32_t> arc_vertex;

  std::size_t arc_count() const { return cuts.empty() ? 1 : cuts.size(); }
  std::size_t arc_of(double x) const;
};

/// Vertical dual of the multimer configuration coded by an excursion.
/// Vertices 0..m-1 are the coded times in increasing order (the last one,
/// n + 1/2, is the bottom pole); vertex m is the synthetic top pole.
class CausalMap {
 public:
  std::int64_t n() const { return n_; }
  std::int64_t max_height() const { return max_height_; }
  double circumference() const { return static_cast<double>(n_ + 1); }
  std::int32_t vertex_count() const { return graph_.size(); }
  std::int32_t root_up() const { return vertex_count() - 2; }
  std::int32_t root_down() const { return vertex_count() - 1; }

  /// Walk index k of a coded vertex (coded time k + 1/2); -1 for the top pole.
  std::int64_t walk_index(std::int32_t v) const {
    return walk_index_[static_cast<std::size_t>(v)];
  }
  /// Slice index: E(k) - 1 for coded vertices, max E for the top pole.
  std::int64_t level(std::int32_t v) const { return level_[static_cast<std::size_t>(v)]; }
  double x(std::int32_t v) const;
  double y(std::int32_t v) const { return static_cast<double>(level(v)) + 0.5; }

  const Graph& graph() const { return graph_; }
  /// Layer l for l in [-1, max E].
  const Layer& layer(std::int64_t l) const {
    return layers_[static_cast<std::size_t>(l + 1)];
  }
  /// Arc index of vertex v inside its layer.
  std::size_t arc(std::int32_t v) const { return arc_[static_cast<std::size_t>(v)]; }

  friend CausalMap build_map(const DiscreteExcursion& e);

 private:
  std::int64_t n_ = 0;
  std::int64_t max_height_ = 0;
  std::vector<std::int64_t> walk_index_;
  std::vector<std::int64_t> level_;
  std::vector<std::size_t> arc_;
  std::vector<Layer> layers_;
  Graph graph_;
};

/// Throws InternalInconsistency if an arc holds no coded time or two.
CausalMap build_map(const DiscreteExcursion& e);

std::vector<std::int32_t> bfs_distance(const CausalMap& m, std::int32_t source);

/// Parent arrays (-1 at the root). The up-tree is rooted at the bottom pole
/// and links each vertex to its leftmost neighbor in the slice below; the
/// down-tree is rooted at the top pole and links to the rightmost neighbor
/// above.
struct DualTrees {
  std::vector<std::int32_t> up_parent;
  std::vector<std::int32_t> down_parent;

  Graph up_graph() const { return graph_of_parents(up_parent); }
  Graph down_graph() const { return graph_of_parents(down_parent); }
  /// Union of both trees; its hop metric restricted to coded times is D*_n.
  Graph union_graph() const;
};

DualTrees build_trees(const CausalMap& m);

/// Edge list `u,v` CSV.
void write_edges_csv(std::ostream& os, const CausalMap& m);
/// JSON array of {id, x, y, walk_index} for every vertex.
void write_vertices_json(std::ostream& os, const CausalMap& m);

}  // namespace shred
