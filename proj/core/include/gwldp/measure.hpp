#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "gwldp/types.hpp"

namespace gwldp {

// Finite nonnegative measure on (type, configuration) pairs, stored sparsely.
// Pairs absent from the support carry weight exactly zero; zero weights are
// never stored, so support_size() counts strictly positive atoms.
class OffspringMeasure {
 public:
  using Map = std::map<Atom, double>;

  OffspringMeasure() = default;

  // Sets the weight of one atom; w must be >= 0, w == 0 erases the atom.
  void set(TypeId parent, OffspringConfig config, double w);
  void add(TypeId parent, const OffspringConfig& config, double w);

  double at(TypeId parent, const OffspringConfig& config) const;
  double at(const Atom& atom) const;

  double mass() const;
  std::size_t support_size() const { return weights_.size(); }
  bool is_probability(double tol = 1e-12) const;

  // Divides every weight by mass(); requires positive mass.
  void normalize();

  const Map& atoms() const { return weights_; }

 private:
  Map weights_;
};

// Marginal on parent types: row a collects all mass with parent type a.
std::vector<double> plain_marginal(const OffspringMeasure& rho, int type_count);

// Offspring intensity: expected children of each type under rho,
// sum over atoms of multiplicity(a, c) * rho(b, c).
std::vector<double> offspring_intensity(const OffspringMeasure& rho, int type_count);

// L1 gap between the plain marginal and the offspring intensity. Empirical
// measures of finite trees have defect at most 2/n; exactly shift-invariant
// measures have defect zero.
double shift_invariance_defect(const OffspringMeasure& rho, int type_count);

double l1_distance(const OffspringMeasure& a, const OffspringMeasure& b);
double l1_distance(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace gwldp
