#pragma once

#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

#include "gwldp/measure.hpp"
#include "gwldp/types.hpp"

namespace gwldp {

// Real-valued function on (type, configuration) pairs with finite support.
// Pairs outside the stored support take value zero, which makes the zero
// function the empty map.
class TestFunction {
 public:
  using Map = std::map<Atom, double>;

  TestFunction() = default;

  void set(TypeId parent, OffspringConfig config, double v) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("test function values must be finite");
    }
    Atom atom{parent, std::move(config)};
    if (v == 0.0) {
      values_.erase(atom);
    } else {
      values_[std::move(atom)] = v;
    }
  }

  double at(TypeId parent, const OffspringConfig& config) const {
    return at(Atom{parent, config});
  }

  double at(const Atom& atom) const {
    auto it = values_.find(atom);
    return it == values_.end() ? 0.0 : it->second;
  }

  const Map& values() const { return values_; }
  bool empty() const { return values_.empty(); }

 private:
  Map values_;
};

// Integral of g against rho; only atoms in both supports contribute.
inline double pairing(const TestFunction& g, const OffspringMeasure& rho) {
  double s = 0.0;
  for (const auto& [atom, w] : rho.atoms()) s += g.at(atom) * w;
  return s;
}

}  // namespace gwldp
