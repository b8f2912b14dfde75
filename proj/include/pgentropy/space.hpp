#pragma once

#include <vector>

namespace pge {

enum class SpaceKind { circle, interval };

// A point of the space. Circle coordinates are kept reduced into [0,1),
// interval coordinates into [0,1].
struct Point {
  double coord = 0.0;
};

// The compact metric space (X, d): either the circle R/Z with the arc-length
// metric (diameter 1/2) or the unit interval with |s - t| (diameter 1).
class CompactSpace {
 public:
  explicit CompactSpace(SpaceKind kind) : kind_(kind) {}

  SpaceKind kind() const { return kind_; }
  const char* name() const {
    return kind_ == SpaceKind::circle ? "circle" : "interval";
  }

  double diameter() const { return kind_ == SpaceKind::circle ? 0.5 : 1.0; }

  double distance(Point a, Point b) const;

  // Canonical reduction of a raw coordinate into the space. The circle uses
  // floor-subtract so that 1.0 reduces to 0.0; the interval clamps.
  Point reduce(double raw) const;

  bool contains(double coord) const;

  // Uniform grid of spacing <= eps covering the space within eps, listed in
  // increasing coordinate order. Circle: ceil(1/eps) points k/m; interval
  // additionally includes the right endpoint. Throws on eps <= 0.
  std::vector<Point> epsilon_net(double eps) const;

 private:
  SpaceKind kind_;
};

}  // namespace pge
