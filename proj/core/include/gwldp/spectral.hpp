#pragma once

#include <string>
#include <vector>

#include "gwldp/measure.hpp"
#include "gwldp/model.hpp"
#include "gwldp/test_function.hpp"
#include "gwldp/types.hpp"

namespace gwldp {

// Mean offspring matrix. entry(a, b) is the expected number of type-a
// children of a type-b parent, row-major over the model's alphabet order.
struct MeanMatrix {
  int dim = 0;
  std::vector<double> entries;

  double at(TypeId a, TypeId b) const {
    return entries[static_cast<std::size_t>(a) * static_cast<std::size_t>(dim) +
                   static_cast<std::size_t>(b)];
  }
  double& at(TypeId a, TypeId b) {
    return entries[static_cast<std::size_t>(a) * static_cast<std::size_t>(dim) +
                   static_cast<std::size_t>(b)];
  }
};

MeanMatrix mean_matrix(const GWModel& model);

// Strong connectivity of the directed graph with an edge b -> a whenever
// entry(a, b) > 0, decided on the boolean pattern only.
bool irreducible(const MeanMatrix& m);

struct Eigenpair {
  double value = 0.0;              // spectral radius estimate
  std::vector<double> vector;      // L1-normalized, entrywise >= 0
  long iterations = 0;
  double residual = 0.0;           // L1 norm of (M - value*I) * vector
};

// Dominant eigenpair by power iteration on M + I, which converges for
// periodic nonnegative patterns as well. Throws ComputeError
// ("convergence_failure") when the residual does not reach tol in max_iter
// steps; expect that for reducible patterns, where the pair is not unique.
Eigenpair perron_eigenpair(const MeanMatrix& m, double tol = 1e-12, long max_iter = 1000000);

enum class Criticality { Subcritical, Critical, Supercritical };

// Critical when |value - 1| <= band, otherwise the sign of value - 1 decides.
Criticality classify(double value, double band = 1e-9);
std::string to_string(Criticality c);

struct SpectralReport {
  double eigenvalue = 0.0;
  std::vector<double> eigenvector;
  bool irreducible = false;
  Criticality criticality = Criticality::Critical;
  long iterations = 0;
  double residual = 0.0;
};

SpectralReport analyze(const GWModel& model, double tol = 1e-12, double band = 1e-9);

// log of the integral of exp(g) against pi (x) K: the normalization exponent
// of the tilted kernel weighted by pi. Monotone and convex in g, and adding a
// constant to g adds that constant to the value.
double spectral_potential(const TestFunction& g, const std::vector<double>& pi,
                          const GWModel& model);

// Gradient of the potential in g: the softmax weights over supp(pi (x) K),
// a probability measure. Each coordinate matches the finite-difference
// derivative of spectral_potential.
OffspringMeasure spectral_potential_gradient(const TestFunction& g, const std::vector<double>& pi,
                                             const GWModel& model);

}  // namespace gwldp
