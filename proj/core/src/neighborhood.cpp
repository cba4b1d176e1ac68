#include "gwldp/neighborhood.hpp"

#include <cmath>

#include "gwldp/errors.hpp"

namespace gwldp {

WeakNeighborhood WeakNeighborhood::l1_ball(OffspringMeasure center, double radius) {
  if (!(radius >= 0.0) || !std::isfinite(radius)) {
    throw ValidationError("bad_radius", "ball radius must be finite and nonnegative");
  }
  return WeakNeighborhood(Ball{std::move(center), radius});
}

WeakNeighborhood WeakNeighborhood::slabs(std::vector<FunctionalConstraint> constraints) {
  for (const auto& c : constraints) {
    if (!(c.half_width > 0.0)) {
      throw ValidationError("bad_half_width", "slab half-widths must be positive");
    }
  }
  return WeakNeighborhood(Slabs{std::move(constraints)});
}

bool WeakNeighborhood::contains(const OffspringMeasure& m) const {
  if (const Ball* b = std::get_if<Ball>(&shape_)) {
    // Empirical measures accumulate 1/n summands, so a measure exactly on
    // the sphere can land an ulp outside. The allowance keeps the closed
    // ball closed under that noise; it is far below any radius of interest.
    return l1_distance(m, b->center) <= b->radius + 1e-12;
  }
  const Slabs& s = std::get<Slabs>(shape_);
  for (const auto& c : s.family) {
    if (std::abs(pairing(c.g, m) - c.center) >= c.half_width) return false;
  }
  return true;
}

}  // namespace gwldp
