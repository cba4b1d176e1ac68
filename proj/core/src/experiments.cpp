#include "gwldp/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "gwldp/errors.hpp"
#include "gwldp/math_util.hpp"
#include "gwldp/rng.hpp"
#include "gwldp/sampler.hpp"

namespace gwldp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

SpectralReport require_critical(const GWModel& model, double band) {
  SpectralReport report = analyze(model, 1e-12, band);
  if (report.criticality != Criticality::Critical) {
    throw ValidationError("not_critical",
                          "this verification is stated at criticality; the model's spectral "
                          "radius is " + std::to_string(report.eigenvalue));
  }
  return report;
}

using MeasureEvent = std::function<bool(const OffspringMeasure&)>;

struct ProbRow {
  std::string method;
  double probability = 0.0;
  double std_error = 0.0;
  long draws = 0;
  long hits = 0;
  long overflows = 0;
};

ProbRow exact_conditional(const GWModel& model, int n, const MeasureEvent& event,
                          std::uint64_t budget) {
  KahanSum hit;
  KahanSum all;
  ProbRow row;
  row.method = "enumeration";
  for_each_tree(model, n, budget, [&](const TypedTree& tree, double p) {
    all.add(p);
    if (event(empirical_offspring_measure(tree))) {
      hit.add(p);
      ++row.hits;
    }
  });
  row.probability = hit.value() / all.value();
  return row;
}

// Ratio estimator for P(event | size n) under the tilted proposal:
// numerator weights size-n trees in the event, denominator all size-n trees.
// The standard error comes from the delta method on the ratio.
ProbRow sampled_conditional(const TiltedModel& tilted, int n, const MeasureEvent& event,
                            long draws, RandomSource rng) {
  ProbRow row;
  row.method = "importance";
  row.draws = draws;
  KahanSum sum_v;
  KahanSum sum_w;
  KahanSum sum_vv;
  KahanSum sum_ww;
  KahanSum sum_vw;
  for (long i = 0; i < draws; ++i) {
    auto sampled = sample_tilted(tilted, rng, n);
    if (!sampled) {
      ++row.overflows;
      continue;
    }
    if (sampled->tree.vertex_count() != n) continue;
    double w = std::exp(sampled->total_log_weight());
    double v = 0.0;
    if (event(empirical_offspring_measure(sampled->tree))) {
      v = w;
      ++row.hits;
    }
    sum_w.add(w);
    sum_v.add(v);
    sum_ww.add(w * w);
    sum_vv.add(v * v);
    sum_vw.add(v * w);
  }
  if (!(sum_w.value() > 0.0)) {
    row.probability = kNaN;
    row.std_error = kNaN;
    return row;
  }
  const double d = static_cast<double>(draws);
  double r = sum_v.value() / sum_w.value();
  row.probability = r;
  double resid_sq = sum_vv.value() - 2.0 * r * sum_vw.value() + r * r * sum_ww.value();
  double mean_w = sum_w.value() / d;
  if (draws > 1 && mean_w > 0.0) {
    double var = std::max(resid_sq, 0.0) / (d - 1.0);
    row.std_error = std::sqrt(var / d) / mean_w;
  }
  return row;
}

// Two-basis least squares for gap(n) ~ (a + b log n) / n.
CorrectionFit fit_correction(const std::vector<std::pair<int, double>>& points) {
  CorrectionFit fit;
  if (points.size() < 2) return fit;
  double s11 = 0.0;
  double s12 = 0.0;
  double s22 = 0.0;
  double y1 = 0.0;
  double y2 = 0.0;
  for (const auto& [n, gap] : points) {
    double f1 = 1.0 / static_cast<double>(n);
    double f2 = std::log(static_cast<double>(n)) / static_cast<double>(n);
    s11 += f1 * f1;
    s12 += f1 * f2;
    s22 += f2 * f2;
    y1 += f1 * gap;
    y2 += f2 * gap;
  }
  double det = s11 * s22 - s12 * s12;
  if (!(std::abs(det) > 1e-300)) return fit;
  fit.a = (y1 * s22 - y2 * s12) / det;
  fit.b = (s11 * y2 - s12 * y1) / det;
  fit.fitted = true;
  for (const auto& [n, gap] : points) {
    double predicted = (fit.a + fit.b * std::log(static_cast<double>(n))) / static_cast<double>(n);
    fit.max_abs_residual = std::max(fit.max_abs_residual, std::abs(gap - predicted));
  }
  return fit;
}

double fit_at(const CorrectionFit& fit, int n) {
  return (fit.a + fit.b * std::log(static_cast<double>(n))) / static_cast<double>(n);
}

std::vector<int> sorted_sizes(std::vector<int> sizes) {
  if (sizes.empty()) {
    throw ValidationError("bad_sizes", "at least one tree size is required");
  }
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
  if (sizes.front() < 1) {
    throw ValidationError("bad_sizes", "tree sizes start at one vertex");
  }
  return sizes;
}

}  // namespace

RateReport verify_lldp(const GWModel& model, const OffspringMeasure& rho,
                       const WeakNeighborhood& hood, const LldpOptions& options) {
  RateReport report;
  report.spectral = require_critical(model, options.band);
  const std::vector<double>& pi = report.spectral.eigenvector;
  auto sizes = sorted_sizes(options.sizes);

  report.seed = options.seed;
  report.draws = options.draws;
  report.exact_size_limit = options.exact_size_limit;
  report.flag_tol = options.flag_tol;
  report.gate_tol = options.gate_tol > 0.0
                        ? options.gate_tol
                        : std::max(1e-9, 3.0 / static_cast<double>(sizes.front()));
  report.rate = kullback_action(pi, model, rho, report.gate_tol);

  // Proposal tilt from the dual solve at rho; fall back to the base model
  // when the solve cannot converge (off-support targets).
  DualSolution dual = dual_value(pi, model, rho);
  report.tilt_status = dual.status;
  report.tilt_value = dual.status == DualStatus::Converged ? dual.value : 0.0;
  TestFunction g = dual.status == DualStatus::Converged ? dual.argmax : TestFunction{};
  TiltedModel proposal = tilt(model, g);

  auto counts = count_census_range(model, sizes.back());
  RandomSource rng(options.seed);
  MeasureEvent event = [&](const OffspringMeasure& m) { return hood.contains(m); };

  std::vector<std::pair<int, double>> fit_points;
  for (int n : sizes) {
    RateRow row;
    row.n = n;
    if (counts[static_cast<std::size_t>(n)] == 0) {
      row.method = "impossible";
      row.probability = 0.0;
      row.log_p_over_n = kNaN;
      row.gap = kNaN;
      report.rows.push_back(std::move(row));
      continue;
    }
    ProbRow p;
    if (n <= options.exact_size_limit &&
        counts[static_cast<std::size_t>(n)] <= BigCount(options.budget)) {
      p = exact_conditional(model, n, event, options.budget);
    } else {
      p = sampled_conditional(proposal, n, event, options.draws, rng.fork(static_cast<std::uint64_t>(n)));
    }
    row.method = p.method;
    row.probability = p.probability;
    row.std_error = p.std_error;
    row.draws = p.draws;
    row.hits = p.hits;
    row.overflows = p.overflows;
    row.log_p_over_n = row.probability > 0.0
                           ? std::log(row.probability) / static_cast<double>(n)
                           : -kInf;
    if (report.rate.finite() && std::isfinite(row.log_p_over_n)) {
      row.gap = row.log_p_over_n + report.rate.value;
      fit_points.emplace_back(n, row.gap);
    } else {
      row.gap = kNaN;
    }
    report.rows.push_back(std::move(row));
  }

  report.fit = fit_correction(fit_points);
  if (report.fit.fitted) {
    for (const auto& row : report.rows) {
      if (std::isfinite(row.gap) && row.gap - fit_at(report.fit, row.n) > report.flag_tol) {
        report.flagged_sizes.push_back(row.n);
      }
    }
  }
  return report;
}

McMillanReport verify_mcmillan(const GWModel& model, const std::vector<int>& sizes, double band) {
  SpectralReport spectral = require_critical(model, band);
  auto ordered = sorted_sizes(sizes);

  McMillanReport report;
  report.target = mcmillan_exponent(offspring_entropy(model), spectral.eigenvector);
  auto counts = count_census_range(model, ordered.back(), LeafPolicy::AllowUnsupported);

  bool have_prev = false;
  int prev_n = 0;
  double prev_log = 0.0;
  for (int n : ordered) {
    McMillanRow row;
    row.n = n;
    row.count = counts[static_cast<std::size_t>(n)];
    if (row.count == 0) {
      report.rows.push_back(std::move(row));
      continue;
    }
    row.log_count = static_cast<double>(boost::multiprecision::log(
        boost::multiprecision::cpp_bin_float_50(row.count)));
    if (have_prev && n > prev_n) {
      row.has_slope = true;
      row.slope = (row.log_count - prev_log) / static_cast<double>(n - prev_n);
      row.deviation = std::abs(row.slope - report.target);
    }
    have_prev = true;
    prev_n = n;
    prev_log = row.log_count;
    report.rows.push_back(std::move(row));
  }
  for (auto it = report.rows.rbegin(); it != report.rows.rend(); ++it) {
    if (it->has_slope) {
      report.final_relative_deviation =
          report.target > 0.0 ? it->deviation / report.target : it->deviation;
      break;
    }
  }
  return report;
}

DualitySummary verify_duality(const GWModel& model, long trials, std::uint64_t seed,
                              const DualSettings& settings) {
  if (trials < 1) throw ValidationError("bad_trials", "at least one trial is required");
  SpectralReport spectral = analyze(model);
  const std::vector<double>& pi = spectral.eigenvector;
  OffspringMeasure mu = product_measure(pi, model);

  DualitySummary summary;
  summary.trials = trials;
  summary.seed = seed;
  RandomSource rng(seed);

  KahanSum gap_sum;
  for (long t = 0; t < trials; ++t) {
    // Uniform Dirichlet over the support via normalized exponentials.
    OffspringMeasure rho;
    for (const auto& [atom, w] : mu.atoms()) {
      rho.set(atom.parent, atom.config, -std::log1p(-rng.next_uniform()));
    }
    rho.normalize();

    DualityTrial trial;
    trial.index = t;
    trial.entropy = relative_entropy(rho, mu);
    DualSolution sol = dual_value(pi, model, rho, settings);
    trial.iterations = sol.iterations;
    if (sol.status == DualStatus::Converged && std::isfinite(trial.entropy)) {
      ++summary.converged;
      trial.dual = sol.value;
      trial.gap = std::abs(sol.value - trial.entropy);
      summary.max_abs_gap = std::max(summary.max_abs_gap, trial.gap);
      gap_sum.add(trial.gap);
    } else {
      ++summary.failures;
      trial.dual = kNaN;
      trial.gap = kNaN;
    }
    summary.rows.push_back(trial);
  }
  if (summary.converged > 0) {
    summary.mean_abs_gap = gap_sum.value() / static_cast<double>(summary.converged);
  }

  // Off-support probe: half the mass on a configuration no kernel row
  // contains (wider than the maximal branch), half on a supported pair.
  OffspringMeasure probe;
  OffspringConfig wide;
  wide.children.assign(static_cast<std::size_t>(model.max_branch()) + 1, TypeId{0});
  probe.set(0, wide, 0.5);
  const Atom& first = mu.atoms().begin()->first;
  probe.set(first.parent, first.config, 0.5);
  summary.probe_entropy_infinite = !std::isfinite(relative_entropy(probe, mu));
  summary.probe_diverged = dual_value(pi, model, probe, settings).diverging();
  return summary;
}

LdpReport verify_ldp_bounds(const GWModel& model, std::vector<WeakNeighborhood> cells,
                            const LdpOptions& options) {
  if (cells.empty()) throw ValidationError("bad_cells", "at least one cell is required");
  LdpReport report;
  SpectralReport spectral = require_critical(model, options.band);
  const std::vector<double>& pi = spectral.eigenvector;
  auto sizes = sorted_sizes(options.sizes);
  report.slack = options.slack;
  report.seed = options.seed;

  report.inf_rate = kInf;
  const OffspringMeasure* best_center = nullptr;
  for (auto& cell : cells) {
    if (!cell.is_l1_ball()) {
      throw ValidationError("bad_cells", "cover cells must be L1 balls around a center measure");
    }
    report.cells.push_back(LdpCell{std::move(cell), KullbackResult{}});
  }
  for (auto& entry : report.cells) {
    entry.rate = kullback_action(pi, model, entry.hood.center(), 1e-9);
    if (entry.rate.finite() && entry.rate.value < report.inf_rate) {
      report.inf_rate = entry.rate.value;
      best_center = &entry.hood.center();
    }
  }

  TestFunction g;
  if (best_center != nullptr) {
    DualSolution dual = dual_value(pi, model, *best_center);
    if (dual.status == DualStatus::Converged) g = dual.argmax;
  }
  TiltedModel proposal = tilt(model, g);

  auto counts = count_census_range(model, sizes.back());
  RandomSource rng(options.seed);
  MeasureEvent in_union = [&](const OffspringMeasure& m) {
    for (const auto& entry : report.cells) {
      if (entry.hood.contains(m)) return true;
    }
    return false;
  };

  for (int n : sizes) {
    LdpRow row;
    row.n = n;
    if (counts[static_cast<std::size_t>(n)] == 0) {
      row.method = "impossible";
      row.probability = 0.0;
      row.log_p_over_n = kNaN;
      row.lower_margin = kNaN;
      row.upper_margin = kNaN;
      report.rows.push_back(std::move(row));
      continue;
    }
    ProbRow p;
    if (n <= options.exact_size_limit &&
        counts[static_cast<std::size_t>(n)] <= BigCount(options.budget)) {
      p = exact_conditional(model, n, in_union, options.budget);
    } else {
      p = sampled_conditional(proposal, n, in_union, options.draws,
                              rng.fork(static_cast<std::uint64_t>(n)));
    }
    row.method = p.method;
    row.probability = p.probability;
    row.std_error = p.std_error;
    row.log_p_over_n = row.probability > 0.0
                           ? std::log(row.probability) / static_cast<double>(n)
                           : -kInf;
    row.lower_margin = row.log_p_over_n + report.inf_rate + options.slack;
    row.upper_margin = -report.inf_rate - row.log_p_over_n;
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace gwldp
