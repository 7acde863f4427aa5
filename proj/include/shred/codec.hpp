#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "shred/excursion.hpp"

namespace shred {

struct Multimer {
  std::int64_t column;  // in [1, n+1]
  std::int64_t bottom;
  std::int64_t length;  // >= 0

  bool operator==(const Multimer&) const = default;
};

/// Hard multimer configuration on the cylinder of width n+1. `root` is the
/// seam column n+1, which also fixes n.
struct MultimerConfig {
  std::vector<Multimer> multimers;  // sorted by column
  std::int64_t root = 0;

  std::int64_t n() const { return root - 1; }
  /// Sum of (length + 1).
  std::int64_t vertex_count() const;
};

MultimerConfig walk_to_multimers(const DiscreteExcursion& e);

/// Inverse of walk_to_multimers; throws MalformedConfig.
DiscreteExcursion multimers_to_walk(const MultimerConfig& m);

void write_multimers_csv(std::ostream& os, const MultimerConfig& m);
MultimerConfig read_multimers_csv(std::istream& is);

struct Slit {
  double x;
  double bottom;
  double top;
  /// Zero-length slits are kept but cannot be crossed.
  bool blocking() const { return top > bottom; }
};

struct SlitList {
  std::vector<Slit> slits;  // sorted by x
  double circumference = 0.0;

  std::size_t blocking_count() const;
};

/// {k+1} x [E(k), E(k+1)] for every step k >= 0; circumference n+1.
SlitList slits_of(const DiscreteExcursion& e);
/// Rescaled version: x = (k+1)/n, heights times n^{-1/alpha},
/// circumference (n+1)/n.
SlitList slits_of(const RescaledExcursion& r);

}  // namespace shred
