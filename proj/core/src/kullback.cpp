#include "gwldp/kullback.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gwldp/math_util.hpp"

namespace gwldp {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

OffspringMeasure product_measure(const std::vector<double>& pi, const GWModel& model) {
  OffspringMeasure mu;
  for (TypeId a = 0; a < model.type_count(); ++a) {
    double p = pi[static_cast<std::size_t>(a)];
    if (p <= 0.0) continue;
    for (const auto& e : model.offspring_row(a)) {
      mu.set(a, e.config, p * e.probability);
    }
  }
  return mu;
}

double relative_entropy(const OffspringMeasure& rho, const OffspringMeasure& mu) {
  KahanSum s;
  for (const auto& [atom, w] : rho.atoms()) {
    double m = mu.at(atom);
    if (m <= 0.0) return kInf;
    s.add(w * std::log(w / m));
  }
  return s.value();
}

double KullbackResult::value_or_infinity() const {
  return finite() ? value : kInf;
}

KullbackResult kullback_action(const std::vector<double>& pi, const GWModel& model,
                               const OffspringMeasure& rho, double gate_tol) {
  const int k = model.type_count();
  KullbackResult r;
  r.shift_defect = shift_invariance_defect(rho, k);
  r.marginal_gap = l1_distance(plain_marginal(rho, k), pi);
  if (r.shift_defect > gate_tol) {
    r.gate = KullbackGate::NotShiftInvariant;
    return r;
  }
  if (r.marginal_gap > gate_tol) {
    r.gate = KullbackGate::MarginalMismatch;
    return r;
  }
  double h = relative_entropy(rho, product_measure(pi, model));
  if (!std::isfinite(h)) {
    r.gate = KullbackGate::NotAbsolutelyContinuous;
    return r;
  }
  r.value = h;
  return r;
}

namespace {

// Flat view of the support of pi (x) K with log masses, the coordinate
// system of the dual ascent.
struct DualSpace {
  std::vector<Atom> atoms;
  std::vector<double> log_mass;  // log(pi(a) * kernel(c|a))
  std::vector<double> rho;       // rho restricted to the support
};

DualSpace make_space(const std::vector<double>& pi, const GWModel& model,
                     const OffspringMeasure& rho) {
  DualSpace s;
  for (TypeId a = 0; a < model.type_count(); ++a) {
    double p = pi[static_cast<std::size_t>(a)];
    if (p <= 0.0) continue;
    for (const auto& e : model.offspring_row(a)) {
      s.atoms.push_back(Atom{a, e.config});
      s.log_mass.push_back(std::log(p) + std::log(e.probability));
      s.rho.push_back(rho.at(a, e.config));
    }
  }
  return s;
}

struct Objective {
  double value;
  std::vector<double> gradient;  // rho - tilted mass
  double gradient_norm1;
};

// F(g) = <g, rho> - log sum exp(g + log_mass). Every tilted mass
// exp(g_i + log_mass_i - lse) lies in (0, 1], so the gradient never
// overflows.
Objective evaluate(const DualSpace& s, const std::vector<double>& g) {
  const std::size_t n = s.atoms.size();
  std::vector<double> shifted(n);
  for (std::size_t i = 0; i < n; ++i) shifted[i] = g[i] + s.log_mass[i];
  double lse = log_sum_exp(shifted);
  Objective o;
  o.gradient.resize(n);
  double pair = 0.0;
  o.gradient_norm1 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    pair += g[i] * s.rho[i];
    o.gradient[i] = s.rho[i] - std::exp(shifted[i] - lse);
    o.gradient_norm1 += std::abs(o.gradient[i]);
  }
  o.value = pair - lse;
  return o;
}

}  // namespace

DualSolution dual_value(const std::vector<double>& pi, const GWModel& model,
                        const OffspringMeasure& rho, const DualSettings& settings) {
  DualSpace space = make_space(pi, model, rho);
  DualSolution sol;

  // Mass of rho outside the support grows the objective linearly along the
  // indicator of that atom; report divergence instead of chasing it.
  double on_support = 0.0;
  for (double w : space.rho) on_support += w;
  if (rho.mass() - on_support > 0.0) {
    for (const auto& [atom, w] : rho.atoms()) {
      bool off = std::find(space.atoms.begin(), space.atoms.end(), atom) == space.atoms.end();
      if (off && w > 0.0) {
        sol.status = DualStatus::Diverging;
        sol.value = kInf;
        return sol;
      }
    }
  }

  const std::size_t n = space.atoms.size();
  std::vector<double> g(n, 0.0);
  Objective cur = evaluate(space, g);
  double step = 1.0;
  std::vector<double> g_prev;
  std::vector<double> grad_prev;
  std::vector<double> g_best = g;
  double best_norm = cur.gradient_norm1;
  double best_value = cur.value;

  long it = 0;
  for (; it < settings.max_iterations; ++it) {
    if (cur.gradient_norm1 < best_norm) {
      best_norm = cur.gradient_norm1;
      best_value = cur.value;
      g_best = g;
    }
    if (best_norm <= settings.gradient_tol) break;
    if (cur.value > settings.ceiling) {
      sol.status = DualStatus::Diverging;
      sol.value = kInf;
      sol.iterations = it;
      return sol;
    }

    // Barzilai-Borwein step seed from the previous accepted move, then
    // monotone Armijo backtracking along the gradient.
    if (!g_prev.empty()) {
      double ss = 0.0;
      double sy = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double si = g[i] - g_prev[i];
        double yi = grad_prev[i] - cur.gradient[i];  // curvature of -F
        ss += si * si;
        sy += si * yi;
      }
      step = sy > 0.0 ? std::clamp(ss / sy, 1e-12, 1e12) : std::min(step * 2.0, 1e12);
    }

    double grad_sq = 0.0;
    for (double d : cur.gradient) grad_sq += d * d;

    // Near the optimum the true increase 1e-4 * eta * |grad|^2 rounds to
    // zero in the stored value, so a strict Armijo test rejects every step
    // and strands the gradient around sqrt(eps). The slack admits any step
    // whose shortfall is below value resolution; the best-gradient iterate
    // recorded above keeps the non-monotone tail from degrading the result.
    const double slack = 1e-13 * (1.0 + std::abs(cur.value));
    std::vector<double> g_next(n);
    Objective next;
    double eta = step;
    bool accepted = false;
    for (int half = 0; half < 80; ++half) {
      for (std::size_t i = 0; i < n; ++i) g_next[i] = g[i] + eta * cur.gradient[i];
      next = evaluate(space, g_next);
      if (next.value >= cur.value + 1e-4 * eta * grad_sq - slack) {
        accepted = true;
        break;
      }
      eta *= 0.5;
    }
    if (!accepted) break;  // even the slacked test failed: numerically stationary

    g_prev = g;
    grad_prev = std::move(cur.gradient);
    cur.gradient.clear();
    g = std::move(g_next);
    cur = std::move(next);
    step = eta;
  }

  if (cur.gradient_norm1 < best_norm) {
    best_norm = cur.gradient_norm1;
    best_value = cur.value;
    g_best = g;
  }
  sol.status = best_norm <= settings.gradient_tol ? DualStatus::Converged
                                                  : DualStatus::IterationLimit;
  sol.value = best_value;
  sol.iterations = it;
  sol.gradient_norm = best_norm;

  // Gauge: F is invariant under adding a constant to g (rho has mass one),
  // fix the representative with rho-mean zero.
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += g_best[i] * space.rho[i];
  for (std::size_t i = 0; i < n; ++i) {
    sol.argmax.set(space.atoms[i].parent, space.atoms[i].config, g_best[i] - mean);
  }
  return sol;
}

std::vector<double> offspring_entropy(const GWModel& model) {
  std::vector<double> h(static_cast<std::size_t>(model.type_count()), 0.0);
  for (TypeId a = 0; a < model.type_count(); ++a) {
    KahanSum s;
    for (const auto& e : model.offspring_row(a)) {
      s.add(-e.probability * std::log(e.probability));
    }
    h[static_cast<std::size_t>(a)] = s.value();
  }
  return h;
}

double mcmillan_exponent(const std::vector<double>& entropy, const std::vector<double>& pi) {
  double s = 0.0;
  for (std::size_t i = 0; i < entropy.size() && i < pi.size(); ++i) s += entropy[i] * pi[i];
  return s;
}

}  // namespace gwldp
