#include "gwldp/measure.hpp"

#include <cmath>
#include <stdexcept>

#include "gwldp/errors.hpp"
#include "gwldp/math_util.hpp"

namespace gwldp {

void OffspringMeasure::set(TypeId parent, OffspringConfig config, double w) {
  if (!(w >= 0.0) || !std::isfinite(w)) {
    throw ValidationError("negative_weight", "measure weights must be finite and nonnegative");
  }
  Atom atom{parent, std::move(config)};
  if (w == 0.0) {
    weights_.erase(atom);
  } else {
    weights_[std::move(atom)] = w;
  }
}

void OffspringMeasure::add(TypeId parent, const OffspringConfig& config, double w) {
  if (w == 0.0) return;
  auto [it, fresh] = weights_.try_emplace(Atom{parent, config}, 0.0);
  it->second += w;
  if (it->second <= 0.0) weights_.erase(it);
}

double OffspringMeasure::at(TypeId parent, const OffspringConfig& config) const {
  auto it = weights_.find(Atom{parent, config});
  return it == weights_.end() ? 0.0 : it->second;
}

double OffspringMeasure::at(const Atom& atom) const {
  auto it = weights_.find(atom);
  return it == weights_.end() ? 0.0 : it->second;
}

double OffspringMeasure::mass() const {
  KahanSum s;
  for (const auto& [atom, w] : weights_) s.add(w);
  return s.value();
}

bool OffspringMeasure::is_probability(double tol) const {
  return std::abs(mass() - 1.0) <= tol;
}

void OffspringMeasure::normalize() {
  double m = mass();
  if (!(m > 0.0)) {
    throw ValidationError("zero_mass", "cannot normalize a measure with no mass");
  }
  for (auto& [atom, w] : weights_) w /= m;
}

std::vector<double> plain_marginal(const OffspringMeasure& rho, int type_count) {
  std::vector<double> out(static_cast<std::size_t>(type_count), 0.0);
  for (const auto& [atom, w] : rho.atoms()) {
    out[static_cast<std::size_t>(atom.parent)] += w;
  }
  return out;
}

std::vector<double> offspring_intensity(const OffspringMeasure& rho, int type_count) {
  std::vector<double> out(static_cast<std::size_t>(type_count), 0.0);
  for (const auto& [atom, w] : rho.atoms()) {
    for (TypeId t : atom.config.children) {
      out[static_cast<std::size_t>(t)] += w;
    }
  }
  return out;
}

double shift_invariance_defect(const OffspringMeasure& rho, int type_count) {
  return l1_distance(plain_marginal(rho, type_count), offspring_intensity(rho, type_count));
}

double l1_distance(const OffspringMeasure& a, const OffspringMeasure& b) {
  double d = 0.0;
  auto ia = a.atoms().begin();
  auto ib = b.atoms().begin();
  while (ia != a.atoms().end() && ib != b.atoms().end()) {
    if (ia->first < ib->first) {
      d += ia->second;
      ++ia;
    } else if (ib->first < ia->first) {
      d += ib->second;
      ++ib;
    } else {
      d += std::abs(ia->second - ib->second);
      ++ia;
      ++ib;
    }
  }
  for (; ia != a.atoms().end(); ++ia) d += ia->second;
  for (; ib != b.atoms().end(); ++ib) d += ib->second;
  return d;
}

double l1_distance(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("l1_distance: dimension mismatch");
  }
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += std::abs(a[i] - b[i]);
  return d;
}

}  // namespace gwldp
