#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <vector>

#include "shred/codec.hpp"
#include "shred/excursion.hpp"
#include "shred/metrics.hpp"

namespace shred {

/// A forbidden open interval (a, b) at abscissa x.
struct Gate {
  double x;
  double a;
  double b;
};

enum class Side : char { kBelow = 'b', kAbove = 'h' };

/// 1-Lipschitz piecewise-linear function with slope -1 left of the first
/// breakpoint and +1 right of the last.
class PLValueFunction {
 public:
  explicit PLValueFunction(double start_height) { pts_[start_height] = 0.0; }

  double operator()(double y) const;
  /// Forbid (a, b) and take the 1-Lipschitz envelope: on (a, b) the function
  /// becomes min(f(a) + y - a, f(b) + b - y). Returns the tent apex.
  double apply_gate(double a, double b);
  std::size_t breakpoints() const { return pts_.size(); }
  /// Largest |slope| over consecutive breakpoints at least 1e-9 apart
  /// (should stay <= 1).
  double max_slope() const;

 private:
  std::map<double, double> pts_;
};

struct VPoint {
  double x;
  double y;
};

struct VResult {
  double value = 0.0;
  bool rightward = true;       // traversal direction of the optimal path
  std::vector<Gate> gates;     // gates met, in traversal order
  std::vector<Side> sides;     // side taken at each gate
  std::vector<VPoint> witness;  // polyline from (s, h_s) to (t, h_t)
};

enum class VMode { kCylinder, kLine };

/// Minimal vertical variation of an x-monotone path from (s, hs) to (t, ht)
/// avoiding the open interiors of all blocking slits. Slits at x = s or x = t
/// are ignored. Cylinder mode minimizes over both ways around.
VResult v_distance(const SlitList& slits, double s, double t, double hs, double ht,
                   VMode mode, bool want_witness = true);

/// Same on an explicit gate list already ordered from s to t.
VResult v_through_gates(const std::vector<Gate>& gates, double s, double t, double hs,
                        double ht, bool want_witness = true);

struct VTarget {
  double x;
  double h;
};

/// V from (s, hs) to every target in one sweep per direction.
std::vector<double> v_from(const SlitList& slits, double s, double hs,
                           const std::vector<VTarget>& targets, VMode mode);

/// Total vertical variation of a polyline.
double variation(const std::vector<VPoint>& path);

/// True if the polyline crosses the open interior of a blocking slit
/// horizontally (cylinder wrap handled by the caller's coordinates).
bool crosses_slits(const std::vector<VPoint>& path, const std::vector<Gate>& gates);

/// V between coded times u + 1/2 and v + 1/2 (walk indices) on the cylinder.
double v_on_walk(const DiscreteExcursion& e, const SlitList& slits, std::int64_t u,
                 std::int64_t v);

struct ZeroPair {
  std::size_t s;
  std::size_t t;
  double v;
  double d_up;
  double d_down;
};

/// Pairs of profile samples with V <= tolerance, annotated with both tree
/// metrics. Sources default to every sample.
std::vector<ZeroPair> v_zero_classes(const SlitList& slits, const HeightProfile& profile,
                                     double tolerance,
                                     const std::vector<std::size_t>& sources = {});

void write_witness_csv(std::ostream& os, const VResult& r);

}  // namespace shred
