#pragma once

#include <variant>
#include <vector>

#include "gwldp/measure.hpp"
#include "gwldp/test_function.hpp"

namespace gwldp {

// One slab of a weak neighborhood: measures whose pairing with g stays
// strictly within half_width of the center value.
struct FunctionalConstraint {
  TestFunction g;
  double center = 0.0;
  double half_width = 0.0;
};

// Weak neighborhood of offspring measures: either a finite intersection of
// open functional slabs, or a closed L1 ball around a center measure. The
// ball is closed so that membership at exactly radius distance, which
// empirical measures often realize, does not hinge on rounding; containment
// carries a 1e-12 allowance to absorb the 1/n accumulation noise of
// empirical measures on the sphere itself.
class WeakNeighborhood {
 public:
  static WeakNeighborhood l1_ball(OffspringMeasure center, double radius);
  static WeakNeighborhood slabs(std::vector<FunctionalConstraint> constraints);

  bool contains(const OffspringMeasure& m) const;

  bool is_l1_ball() const { return std::holds_alternative<Ball>(shape_); }
  const OffspringMeasure& center() const { return std::get<Ball>(shape_).center; }
  double radius() const { return std::get<Ball>(shape_).radius; }
  const std::vector<FunctionalConstraint>& constraints() const {
    return std::get<Slabs>(shape_).family;
  }

 private:
  struct Ball {
    OffspringMeasure center;
    double radius;
  };
  struct Slabs {
    std::vector<FunctionalConstraint> family;
  };

  explicit WeakNeighborhood(Ball b) : shape_(std::move(b)) {}
  explicit WeakNeighborhood(Slabs s) : shape_(std::move(s)) {}

  std::variant<Ball, Slabs> shape_;
};

}  // namespace gwldp
