#pragma once

#include <vector>

#include "gwldp/measure.hpp"
#include "gwldp/model.hpp"
#include "gwldp/test_function.hpp"
#include "gwldp/types.hpp"

namespace gwldp {

// The measure pi (x) K: mass pi(a) * kernel(c | a) on each supported pair.
OffspringMeasure product_measure(const std::vector<double>& pi, const GWModel& model);

// Relative entropy H(rho || mu): sum of rho * log(rho / mu) over the support
// of rho, +infinity when rho puts mass where mu has none. Both measures are
// used as given; rho is expected to be a probability measure.
double relative_entropy(const OffspringMeasure& rho, const OffspringMeasure& mu);

enum class KullbackGate {
  Admissible,             // finite value computed
  NotShiftInvariant,      // shift defect beyond the gate tolerance
  MarginalMismatch,       // parent marginal differs from pi beyond the gate
  NotAbsolutelyContinuous // rho charges a pair outside the kernel support
};

struct KullbackResult {
  KullbackGate gate = KullbackGate::Admissible;
  double value = 0.0;        // meaningful only when finite()
  double shift_defect = 0.0; // always reported
  double marginal_gap = 0.0; // always reported

  bool finite() const { return gate == KullbackGate::Admissible; }
  // The rate function value: the entropy when admissible, +infinity otherwise.
  double value_or_infinity() const;
};

// Rate function of the offspring law at rho. Finite exactly on probability
// measures that are shift-invariant with parent marginal pi (both up to
// gate_tol, which absorbs the 1/n defect of empirical measures) and
// absolutely continuous with respect to pi (x) K.
KullbackResult kullback_action(const std::vector<double>& pi, const GWModel& model,
                               const OffspringMeasure& rho, double gate_tol = 1e-9);

struct DualSettings {
  double gradient_tol = 1e-10;
  long max_iterations = 100000;
  double ceiling = 1e3;  // objective above this is treated as divergence
};

enum class DualStatus { Converged, Diverging, IterationLimit };

struct DualSolution {
  DualStatus status = DualStatus::Converged;
  double value = 0.0;
  TestFunction argmax;       // gauge-fixed so its rho-mean is zero
  long iterations = 0;
  double gradient_norm = 0.0;
  bool diverging() const { return status == DualStatus::Diverging; }
};

// Concave maximization of <g, rho> minus the spectral potential over test
// functions supported on the kernel support. For probability measures rho
// absolutely continuous with respect to pi (x) K the supremum equals
// H(rho || pi (x) K); when rho charges an unsupported pair the objective is
// unbounded and the solve reports Diverging.
DualSolution dual_value(const std::vector<double>& pi, const GWModel& model,
                        const OffspringMeasure& rho, const DualSettings& settings = {});

// Shannon entropy of each type's offspring row, nats.
std::vector<double> offspring_entropy(const GWModel& model);

// Inner product of per-type entropies with the weight vector pi: the growth
// exponent of weighted tree counts.
double mcmillan_exponent(const std::vector<double>& entropy, const std::vector<double>& pi);

}  // namespace gwldp
