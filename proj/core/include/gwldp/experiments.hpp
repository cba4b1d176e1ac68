#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gwldp/enumerate.hpp"
#include "gwldp/kullback.hpp"
#include "gwldp/measure.hpp"
#include "gwldp/model.hpp"
#include "gwldp/neighborhood.hpp"
#include "gwldp/spectral.hpp"

namespace gwldp {

// One size row of a rate-verification run. Exact rows come from full
// enumeration; sampled rows from importance sampling under the dual tilt.
struct RateRow {
  int n = 0;
  std::string method;        // "enumeration" | "importance" | "impossible"
  double probability = 0.0;  // conditional on size n
  double std_error = 0.0;    // 0 for enumeration rows
  long draws = 0;
  long hits = 0;             // size-n draws landing in the event
  long overflows = 0;
  double log_p_over_n = 0.0;  // (1/n) log probability; -inf when probability is 0
  double gap = 0.0;           // log_p_over_n + rate value; NaN when undefined
};

// Least squares fit of gap(n) by (a + b log n) / n, the finite-size
// correction shape.
struct CorrectionFit {
  bool fitted = false;
  double a = 0.0;
  double b = 0.0;
  double max_abs_residual = 0.0;
};

struct RateReport {
  SpectralReport spectral;
  KullbackResult rate;       // J at the target measure
  DualStatus tilt_status = DualStatus::Converged;
  double tilt_value = 0.0;   // dual value backing the sampler tilt
  std::vector<RateRow> rows;
  CorrectionFit fit;
  std::vector<int> flagged_sizes;  // rows whose gap exceeds the fit by flag_tol
  double flag_tol = 0.0;
  double gate_tol = 0.0;
  std::uint64_t seed = 0;
  long draws = 0;
  int exact_size_limit = 0;
};

struct LldpOptions {
  std::vector<int> sizes;
  std::uint64_t seed = 1;
  long draws = 200000;
  int exact_size_limit = 19;     // full enumeration up to here, sampling beyond
  std::uint64_t budget = 10000000;
  double gate_tol = 0.0;         // 0 picks max(1e-9, 3 / smallest size)
  double flag_tol = 0.02;
  double band = 1e-9;            // criticality band
};

// Measures log P(empirical measure near rho | size n) / n against -J(pi, rho)
// across sizes. Requires a critical model; a failed admissibility gate still
// produces the probability rows, only the comparison is skipped.
RateReport verify_lldp(const GWModel& model, const OffspringMeasure& rho,
                       const WeakNeighborhood& hood, const LldpOptions& options);

struct McMillanRow {
  int n = 0;
  BigCount count;
  double log_count = 0.0;
  bool has_slope = false;
  double slope = 0.0;      // (log count(n) - log count(prev)) / (n - prev)
  double deviation = 0.0;  // |slope - target|
};

struct McMillanReport {
  double target = 0.0;  // entropy exponent <H, pi>
  std::vector<McMillanRow> rows;
  // |slope - target| / target at the largest size, absolute when target is 0.
  double final_relative_deviation = 0.0;
};

// Compares growth of combinatorial tree counts (leaves always admissible)
// against the entropy exponent. Requires a critical model.
McMillanReport verify_mcmillan(const GWModel& model, const std::vector<int>& sizes,
                               double band = 1e-9);

struct DualityTrial {
  long index = 0;
  double entropy = 0.0;  // H(rho || pi (x) K)
  double dual = 0.0;     // optimizer value
  double gap = 0.0;      // |dual - entropy|
  long iterations = 0;
};

struct DualitySummary {
  long trials = 0;
  std::uint64_t seed = 0;
  long converged = 0;
  long failures = 0;  // solves that neither converged nor diverged
  double max_abs_gap = 0.0;
  double mean_abs_gap = 0.0;
  // The off-support probe: a measure charging an unsupported pair must make
  // the entropy infinite and the solve report divergence.
  bool probe_entropy_infinite = false;
  bool probe_diverged = false;
  std::vector<DualityTrial> rows;
};

// Draws random full-support probability measures on the kernel support and
// checks the optimizer value against the closed-form relative entropy, plus
// one deliberate off-support probe.
DualitySummary verify_duality(const GWModel& model, long trials, std::uint64_t seed,
                              const DualSettings& settings = {});

struct LdpCell {
  WeakNeighborhood hood;
  KullbackResult rate;  // J at the cell center
};

struct LdpRow {
  int n = 0;
  std::string method;
  double probability = 0.0;  // of the union, conditional on size n
  double std_error = 0.0;
  double log_p_over_n = 0.0;
  double lower_margin = 0.0;  // log_p_over_n + inf_rate + slack, wants >= 0
  double upper_margin = 0.0;  // -inf_rate - log_p_over_n, wants >= 0
};

struct LdpReport {
  std::vector<LdpCell> cells;
  double inf_rate = 0.0;  // smallest finite J over cell centers
  double slack = 0.0;
  std::vector<LdpRow> rows;
  std::uint64_t seed = 0;
};

struct LdpOptions {
  std::vector<int> sizes;
  std::uint64_t seed = 1;
  long draws = 200000;
  int exact_size_limit = 19;
  std::uint64_t budget = 10000000;
  double slack = 0.15;
  double band = 1e-9;
};

// Sandwich test for a finite cover: probability of the union of cells versus
// exp(-n (inf J + slack)) from below and exp(-n inf J) from above, where the
// infimum runs over cell centers with finite rate. Requires a critical model.
LdpReport verify_ldp_bounds(const GWModel& model, std::vector<WeakNeighborhood> cells,
                            const LdpOptions& options);

}  // namespace gwldp
