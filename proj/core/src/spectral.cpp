#include "gwldp/spectral.hpp"

#include <cmath>
#include <numeric>

#include "gwldp/errors.hpp"
#include "gwldp/math_util.hpp"

namespace gwldp {

MeanMatrix mean_matrix(const GWModel& model) {
  const int k = model.type_count();
  MeanMatrix m{k, std::vector<double>(static_cast<std::size_t>(k) * k, 0.0)};
  for (TypeId b = 0; b < k; ++b) {
    for (const auto& e : model.offspring_row(b)) {
      for (TypeId t : e.config.children) {
        m.at(t, b) += e.probability;
      }
    }
  }
  return m;
}

namespace {

// Reachability closure of the boolean pattern of m, column -> row edges.
std::vector<bool> reachable_from(const MeanMatrix& m, int start) {
  const int k = m.dim;
  std::vector<bool> seen(static_cast<std::size_t>(k), false);
  std::vector<int> stack{start};
  seen[static_cast<std::size_t>(start)] = true;
  while (!stack.empty()) {
    int b = stack.back();
    stack.pop_back();
    for (int a = 0; a < k; ++a) {
      if (!seen[static_cast<std::size_t>(a)] && m.at(a, b) > 0.0) {
        seen[static_cast<std::size_t>(a)] = true;
        stack.push_back(a);
      }
    }
  }
  return seen;
}

}  // namespace

bool irreducible(const MeanMatrix& m) {
  for (int start = 0; start < m.dim; ++start) {
    auto seen = reachable_from(m, start);
    for (bool s : seen) {
      if (!s) return false;
    }
  }
  return true;
}

Eigenpair perron_eigenpair(const MeanMatrix& m, double tol, long max_iter) {
  const int k = m.dim;
  std::vector<double> x(static_cast<std::size_t>(k), 1.0 / static_cast<double>(k));
  std::vector<double> z(static_cast<std::size_t>(k), 0.0);
  for (long it = 0; it <= max_iter; ++it) {
    // z = (M + I) x; the shift keeps periodic patterns converging.
    double xx = 0.0;
    double xz = 0.0;
    for (int a = 0; a < k; ++a) {
      double s = x[static_cast<std::size_t>(a)];
      for (int b = 0; b < k; ++b) {
        s += m.at(a, b) * x[static_cast<std::size_t>(b)];
      }
      z[static_cast<std::size_t>(a)] = s;
    }
    for (int a = 0; a < k; ++a) {
      xx += x[static_cast<std::size_t>(a)] * x[static_cast<std::size_t>(a)];
      xz += x[static_cast<std::size_t>(a)] * z[static_cast<std::size_t>(a)];
    }
    double shifted = xz / xx;  // Rayleigh quotient of M + I
    double residual = 0.0;
    double z_mass = 0.0;
    for (int a = 0; a < k; ++a) {
      residual += std::abs(z[static_cast<std::size_t>(a)] - shifted * x[static_cast<std::size_t>(a)]);
      z_mass += z[static_cast<std::size_t>(a)];
    }
    if (residual <= tol) {
      return Eigenpair{shifted - 1.0, x, it, residual};
    }
    for (int a = 0; a < k; ++a) x[static_cast<std::size_t>(a)] = z[static_cast<std::size_t>(a)] / z_mass;
  }
  throw ComputeError("convergence_failure",
                     "power iteration did not reach tolerance; the mean matrix may be reducible");
}

Criticality classify(double value, double band) {
  if (std::abs(value - 1.0) <= band) return Criticality::Critical;
  return value > 1.0 ? Criticality::Supercritical : Criticality::Subcritical;
}

std::string to_string(Criticality c) {
  switch (c) {
    case Criticality::Subcritical: return "Subcritical";
    case Criticality::Critical: return "Critical";
    case Criticality::Supercritical: return "Supercritical";
  }
  return "Unknown";
}

SpectralReport analyze(const GWModel& model, double tol, double band) {
  MeanMatrix m = mean_matrix(model);
  Eigenpair pair = perron_eigenpair(m, tol);
  SpectralReport report;
  report.eigenvalue = pair.value;
  report.eigenvector = std::move(pair.vector);
  report.irreducible = irreducible(m);
  report.criticality = classify(pair.value, band);
  report.iterations = pair.iterations;
  report.residual = pair.residual;
  return report;
}

double spectral_potential(const TestFunction& g, const std::vector<double>& pi,
                          const GWModel& model) {
  std::vector<double> terms;
  for (TypeId a = 0; a < model.type_count(); ++a) {
    double p = pi[static_cast<std::size_t>(a)];
    if (p <= 0.0) continue;
    double log_p = std::log(p);
    for (const auto& e : model.offspring_row(a)) {
      terms.push_back(log_p + std::log(e.probability) + g.at(a, e.config));
    }
  }
  return log_sum_exp(terms);
}

OffspringMeasure spectral_potential_gradient(const TestFunction& g, const std::vector<double>& pi,
                                             const GWModel& model) {
  std::vector<Atom> atoms;
  std::vector<double> terms;
  for (TypeId a = 0; a < model.type_count(); ++a) {
    double p = pi[static_cast<std::size_t>(a)];
    if (p <= 0.0) continue;
    double log_p = std::log(p);
    for (const auto& e : model.offspring_row(a)) {
      atoms.push_back(Atom{a, e.config});
      terms.push_back(log_p + std::log(e.probability) + g.at(a, e.config));
    }
  }
  double lse = log_sum_exp(terms);
  OffspringMeasure grad;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    grad.set(atoms[i].parent, atoms[i].config, std::exp(terms[i] - lse));
  }
  return grad;
}

}  // namespace gwldp
