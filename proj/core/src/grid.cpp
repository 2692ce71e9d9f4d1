#include "fracpar/grid.hpp"

#include <cmath>
#include <string>

namespace fracpar {

Grid Grid::make(int spatial_dims, int nx, int nt, double Lx, double Lt) {
  if (spatial_dims < 1 || spatial_dims > 2) {
    throw InvalidArgumentError("Grid: spatial_dims must be 1 or 2, got " +
                               std::to_string(spatial_dims));
  }
  if (nx < 4 || nx % 2 != 0 || nt < 4 || nt % 2 != 0) {
    throw InvalidArgumentError(
        "Grid: nx and nt must be even and at least 4, got nx=" +
        std::to_string(nx) + " nt=" + std::to_string(nt));
  }
  if (!(Lx > 0.0) || !(Lt > 0.0)) {
    throw InvalidArgumentError("Grid: Lx and Lt must be positive");
  }
  Grid g;
  g.spatial_dims = spatial_dims;
  g.nx = nx;
  g.nt = nt;
  g.Lx = Lx;
  g.Lt = Lt;
  return g;
}

double Grid::cell_measure() const {
  double m = dt();
  for (int d = 0; d < spatial_dims; ++d) m *= dx();
  return m;
}

std::size_t Grid::spatial_points() const {
  std::size_t p = 1;
  for (int d = 0; d < spatial_dims; ++d) p *= static_cast<std::size_t>(nx);
  return p;
}

std::size_t Grid::size() const { return spatial_points() * nt; }

double periodic_distance(double a, double b, double L) {
  double d = std::fabs(a - b);
  d = std::fmod(d, L);
  return std::min(d, L - d);
}

bool ParabolicCube::contains(const Grid& grid, const ParabolicPoint& p) const {
  for (int d = 0; d < grid.spatial_dims; ++d) {
    if (periodic_distance(p.x[d], center.x[d], grid.Lx) >= radius) return false;
  }
  return periodic_distance(p.t, center.t, grid.Lt) < radius * radius;
}

double parabolic_distance(const Grid& grid, const ParabolicPoint& p,
                          const ParabolicPoint& q) {
  double sq = 0.0;
  for (int d = 0; d < grid.spatial_dims; ++d) {
    double dd = periodic_distance(p.x[d], q.x[d], grid.Lx);
    sq += dd * dd;
  }
  double ddt = periodic_distance(p.t, q.t, grid.Lt);
  return std::sqrt(sq) + std::sqrt(ddt);
}

}  // namespace fracpar
