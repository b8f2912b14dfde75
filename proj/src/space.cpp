#include "pgentropy/space.hpp"

#include <cmath>
#include <stdexcept>

namespace pge {

double CompactSpace::distance(Point a, Point b) const {
  double d = std::fabs(a.coord - b.coord);
  if (kind_ == SpaceKind::circle) return std::min(d, 1.0 - d);
  return d;
}

Point CompactSpace::reduce(double raw) const {
  if (kind_ == SpaceKind::circle) {
    double r = raw - std::floor(raw);
    if (r >= 1.0) r = 0.0;  // rounding of tiny negatives can land on 1.0
    return Point{r};
  }
  if (raw < 0.0) return Point{0.0};
  if (raw > 1.0) return Point{1.0};
  return Point{raw};
}

bool CompactSpace::contains(double coord) const {
  if (kind_ == SpaceKind::circle) return coord >= 0.0 && coord < 1.0;
  return coord >= 0.0 && coord <= 1.0;
}

std::vector<Point> CompactSpace::epsilon_net(double eps) const {
  if (!(eps > 0.0)) throw std::invalid_argument("epsilon_net: eps must be > 0");
  // m chosen so the grid spacing 1/m is <= eps.
  auto m = static_cast<long long>(std::ceil(1.0 / eps - 1e-12));
  if (m < 1) m = 1;
  std::vector<Point> net;
  if (kind_ == SpaceKind::circle) {
    net.reserve(static_cast<size_t>(m));
    for (long long k = 0; k < m; ++k)
      net.push_back(Point{static_cast<double>(k) / static_cast<double>(m)});
  } else {
    net.reserve(static_cast<size_t>(m) + 1);
    for (long long k = 0; k <= m; ++k)
      net.push_back(Point{static_cast<double>(k) / static_cast<double>(m)});
  }
  return net;
}

}  // namespace pge
