// Command line front end: model analysis, rate computations, sampling,
// enumeration and the verification drivers. Every command reads JSON models,
// prints its report to stdout, and optionally writes the same bytes to
// --out. Stochastic commands require an explicit seed and are byte-stable
// for a fixed seed.

#include <cstdlib>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gwldp/enumerate.hpp"
#include "gwldp/errors.hpp"
#include "gwldp/experiments.hpp"
#include "gwldp/kullback.hpp"
#include "gwldp/model_io.hpp"
#include "gwldp/neighborhood.hpp"
#include "gwldp/report_io.hpp"
#include "gwldp/sampler.hpp"
#include "gwldp/spectral.hpp"
#include "gwldp/tree.hpp"

namespace {

using namespace gwldp;
using ordered_json = nlohmann::ordered_json;

// "5,9,...,101" expands the ellipsis by the step of the two preceding
// values, stopping before the next listed value.
std::vector<int> parse_sizes(const std::string& spec) {
  std::vector<std::string> tokens;
  std::istringstream in(spec);
  std::string tok;
  while (std::getline(in, tok, ',')) tokens.push_back(tok);

  std::vector<int> sizes;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i] == "...") {
      if (sizes.size() < 2 || i + 1 >= tokens.size()) {
        throw ValidationError("bad_sizes",
                              "'...' needs two values before it and one after it");
      }
      int step = sizes[sizes.size() - 1] - sizes[sizes.size() - 2];
      int next = 0;
      try {
        next = std::stoi(tokens[i + 1]);
      } catch (const std::exception&) {
        throw ValidationError("bad_sizes", "'" + tokens[i + 1] + "' is not a size");
      }
      if (step < 1 || next <= sizes.back()) {
        throw ValidationError("bad_sizes", "'...' needs an increasing progression");
      }
      for (int v = sizes.back() + step; v < next; v += step) sizes.push_back(v);
      continue;
    }
    try {
      sizes.push_back(std::stoi(tokens[i]));
    } catch (const std::exception&) {
      throw ValidationError("bad_sizes", "'" + tokens[i] + "' is not a size");
    }
  }
  if (sizes.empty()) throw ValidationError("bad_sizes", "no sizes given");
  return sizes;
}

// Ball specs: "l1:RADIUS" (center supplied by the caller) or
// "l1:RADIUS:CENTER" where CENTER is "product" or a measure file.
struct BallSpec {
  double radius = 0.0;
  std::string center;  // empty: caller's default
};

BallSpec parse_ball_spec(const std::string& spec) {
  if (spec.rfind("l1:", 0) != 0) {
    throw ValidationError("bad_ball", "ball spec must look like l1:RADIUS or l1:RADIUS:CENTER");
  }
  std::string rest = spec.substr(3);
  BallSpec out;
  std::size_t colon = rest.find(':');
  std::string radius_part = colon == std::string::npos ? rest : rest.substr(0, colon);
  if (colon != std::string::npos) out.center = rest.substr(colon + 1);
  try {
    std::size_t used = 0;
    out.radius = std::stod(radius_part, &used);
    if (used != radius_part.size()) throw std::invalid_argument(radius_part);
  } catch (const std::exception&) {
    throw ValidationError("bad_ball", "'" + radius_part + "' is not a radius");
  }
  if (!(out.radius >= 0.0)) {
    throw ValidationError("bad_ball", "ball radius must be nonnegative");
  }
  return out;
}

std::uint64_t default_budget() {
  if (const char* env = std::getenv("GWLDP_BUDGET")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != nullptr && *end == '\0' && v > 0) return v;
    throw ValidationError("bad_budget", "GWLDP_BUDGET must be a positive integer");
  }
  return 10000000ULL;
}

// The measure behind --rho: a file path or the literal "product" for the
// stationary product measure pi (x) K.
OffspringMeasure resolve_measure(const std::string& spec, const GWModel& model,
                                 const std::vector<double>& pi) {
  if (spec == "product") return product_measure(pi, model);
  return load_measure_file(spec, model);
}

void emit(const std::string& content, const std::string& out_path) {
  std::cout << content;
  if (!out_path.empty()) write_text_file(out_path, content);
}

// Reports with a tabular twin: --out report.json also writes report.csv.
void emit_with_csv(const std::string& json_text, const std::string& csv_text,
                   const std::string& out_path) {
  std::cout << json_text;
  if (out_path.empty()) return;
  write_text_file(out_path, json_text);
  std::string csv_path = out_path;
  if (csv_path.size() > 5 && csv_path.rfind(".json") == csv_path.size() - 5) {
    csv_path.replace(csv_path.size() - 5, 5, ".csv");
  } else {
    csv_path += ".csv";
  }
  write_text_file(csv_path, csv_text);
}

struct CommonArgs {
  std::string model_path;
  std::string out_path;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--model", args.model_path, "Model JSON file")->required();
  cmd->add_option("--out", args.out_path, "Write the report to this file");
}

int run(int argc, char** argv) {
  CLI::App app{
      "Branching process rate-function toolkit: spectral analysis, Kullback "
      "rate and its Legendre dual, exact enumeration, conditioned and tilted "
      "sampling, and the large-deviation verification drivers."};
  app.require_subcommand(1);

  // analyze
  CommonArgs an_args;
  double an_band = 1e-9;
  double an_tol = 1e-12;
  auto* an = app.add_subcommand("analyze", "Mean matrix spectrum and criticality");
  add_common(an, an_args);
  an->add_option("--band", an_band, "Criticality band around eigenvalue 1");
  an->add_option("--tol", an_tol, "Power iteration residual tolerance");

  // rate
  CommonArgs rate_args;
  std::string rate_rho;
  double rate_gate = 1e-9;
  bool rate_bits = false;
  auto* rate = app.add_subcommand("rate", "Kullback rate of a measure with gates");
  add_common(rate, rate_args);
  rate->add_option("--rho", rate_rho, "Measure file, or 'product' for pi (x) K")->required();
  rate->add_option("--gate-tol", rate_gate, "Shift-invariance and marginal gate tolerance");
  rate->add_flag("--bits", rate_bits, "Report entropies in bits instead of nats");

  // dual
  CommonArgs dual_args;
  std::string dual_rho;
  DualSettings dual_settings;
  bool dual_bits = false;
  auto* dual = app.add_subcommand("dual", "Legendre dual of the spectral potential");
  add_common(dual, dual_args);
  dual->add_option("--rho", dual_rho, "Measure file, or 'product' for pi (x) K")->required();
  dual->add_option("--dual-tol", dual_settings.gradient_tol, "Gradient L1 stopping tolerance");
  dual->add_option("--dual-max-iter", dual_settings.max_iterations, "Ascent iteration cap");
  dual->add_option("--dual-ceiling", dual_settings.ceiling,
                   "Objective value treated as divergence");
  dual->add_flag("--bits", dual_bits, "Report entropies in bits instead of nats");

  // sample
  CommonArgs sample_args;
  int sample_n = 0;
  long sample_draws = 1;
  long sample_attempts = 0;
  std::uint64_t sample_seed = 0;
  auto* sample = app.add_subcommand("sample", "Rejection-sample trees conditioned on size");
  add_common(sample, sample_args);
  sample->add_option("--n", sample_n, "Exact tree size to condition on")->required();
  sample->add_option("--count", sample_draws, "Number of conditioned trees");
  sample->add_option("--seed", sample_seed, "Random seed")->required();
  sample->add_option("--max-attempts", sample_attempts,
                     "Rejection attempts per draw; 0 sizes the budget from the acceptance rate");

  // tilt-sample
  CommonArgs tilt_args;
  std::string tilt_g_path;
  std::string tilt_root = "base";
  long tilt_draws = 1;
  long tilt_cap = 1000000;
  std::uint64_t tilt_seed = 0;
  auto* tilts = app.add_subcommand("tilt-sample", "Sample the tilted model with weights");
  add_common(tilts, tilt_args);
  tilts->add_option("--g", tilt_g_path, "Test function file; omitted means zero tilt");
  tilts->add_option("--root-law", tilt_root,
                    "Root draw: 'base' or 'stationary' for the eigenvector law")
      ->check(CLI::IsMember({"base", "stationary"}));
  tilts->add_option("--count", tilt_draws, "Number of draws");
  tilts->add_option("--cap", tilt_cap, "Population cap per draw");
  tilts->add_option("--seed", tilt_seed, "Random seed")->required();

  // enumerate
  CommonArgs enum_args;
  int enum_n = 0;
  std::uint64_t enum_budget = 0;
  auto* enumerate = app.add_subcommand("enumerate", "List every size-n tree with its mass");
  add_common(enumerate, enum_args);
  enumerate->add_option("--n", enum_n, "Tree size")->required();
  enumerate->add_option("--budget", enum_budget,
                        "Largest census this run may materialize (default GWLDP_BUDGET or 1e7)");

  // count
  CommonArgs count_args;
  int count_nmax = 0;
  std::string count_policy = "strict";
  auto* count = app.add_subcommand("count", "Census sizes and the exact size law");
  add_common(count, count_args);
  count->add_option("--n-max", count_nmax, "Largest size to tabulate")->required();
  count->add_option("--leaf-policy", count_policy,
                    "'strict' counts supported leaves only; 'free' admits any leaf")
      ->check(CLI::IsMember({"strict", "free"}));

  // verify-lldp
  CommonArgs lldp_args;
  std::string lldp_rho = "product";
  std::string lldp_ball = "l1:0.2";
  std::string lldp_sizes;
  std::uint64_t lldp_seed = 0;
  LldpOptions lldp_options;
  std::uint64_t lldp_budget = 0;
  auto* lldp = app.add_subcommand("verify-lldp",
                                  "Rate of decay of P(empirical measure near rho | size)");
  add_common(lldp, lldp_args);
  lldp->add_option("--rho", lldp_rho, "Target measure file, or 'product'");
  lldp->add_option("--ball", lldp_ball, "Neighborhood around rho, as l1:RADIUS");
  lldp->add_option("--sizes", lldp_sizes, "Sizes like 5,9,...,101")->required();
  lldp->add_option("--seed", lldp_seed, "Random seed")->required();
  lldp->add_option("--draws", lldp_options.draws, "Importance-sampling draws per size");
  lldp->add_option("--exact-limit", lldp_options.exact_size_limit,
                   "Enumerate exactly up to this size, sample beyond");
  lldp->add_option("--budget", lldp_budget, "Census budget (default GWLDP_BUDGET or 1e7)");
  lldp->add_option("--gate-tol", lldp_options.gate_tol,
                   "Admissibility gate tolerance; 0 picks max(1e-9, 3/min size)");
  lldp->add_option("--flag-tol", lldp_options.flag_tol,
                   "Gap beyond the fitted correction that flags a size");
  lldp->add_option("--band", lldp_options.band, "Criticality band");

  // verify-mcmillan
  CommonArgs mcm_args;
  int mcm_nmax = 0;
  double mcm_band = 1e-9;
  bool mcm_bits = false;
  auto* mcm = app.add_subcommand("verify-mcmillan",
                                 "Tree-count growth against the entropy exponent");
  add_common(mcm, mcm_args);
  mcm->add_option("--n-max", mcm_nmax, "Count censuses for every size up to this")->required();
  mcm->add_option("--band", mcm_band, "Criticality band");
  mcm->add_flag("--bits", mcm_bits, "Report log counts and entropies in bits instead of nats");

  // verify-duality
  CommonArgs dual_verify_args;
  long trials = 100;
  std::uint64_t duality_seed = 0;
  DualSettings duality_settings;
  bool duality_bits = false;
  auto* dual_verify = app.add_subcommand("verify-duality",
                                         "Optimizer value against closed-form relative entropy");
  add_common(dual_verify, dual_verify_args);
  dual_verify->add_option("--trials", trials, "Random measures to test");
  dual_verify->add_option("--seed", duality_seed, "Random seed")->required();
  dual_verify->add_option("--dual-tol", duality_settings.gradient_tol,
                          "Gradient stopping tolerance");
  dual_verify->add_option("--dual-max-iter", duality_settings.max_iterations,
                          "Ascent iteration cap");
  dual_verify->add_option("--dual-ceiling", duality_settings.ceiling,
                          "Objective value treated as divergence");
  dual_verify->add_flag("--bits", duality_bits, "Report entropies in bits instead of nats");

  // verify-ldp
  CommonArgs ldp_args;
  std::vector<std::string> ldp_cells;
  std::string ldp_sizes;
  std::uint64_t ldp_seed = 0;
  LdpOptions ldp_options;
  std::uint64_t ldp_budget = 0;
  auto* ldp = app.add_subcommand("verify-ldp",
                                 "Sandwich bounds for the probability of a finite cover");
  add_common(ldp, ldp_args);
  ldp->add_option("--cell", ldp_cells,
                  "Cover cell l1:RADIUS:CENTER with CENTER a measure file or 'product'; repeatable")
      ->required();
  ldp->add_option("--sizes", ldp_sizes, "Sizes like 5,9,...,19")->required();
  ldp->add_option("--seed", ldp_seed, "Random seed")->required();
  ldp->add_option("--draws", ldp_options.draws, "Importance-sampling draws per size");
  ldp->add_option("--exact-limit", ldp_options.exact_size_limit,
                  "Enumerate exactly up to this size, sample beyond");
  ldp->add_option("--budget", ldp_budget, "Census budget (default GWLDP_BUDGET or 1e7)");
  ldp->add_option("--slack", ldp_options.slack, "Lower-bound slack per vertex");
  ldp->add_option("--band", ldp_options.band, "Criticality band");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    ordered_json err;
    err["error"] = "bad_arguments";
    err["detail"] = e.what();
    std::cerr << err.dump() << "\n";
    return 1;
  }

  if (an->parsed()) {
    GWModel model = load_model_file(an_args.model_path);
    SpectralReport report = analyze(model, an_tol, an_band);
    emit(spectral_to_json(report, model), an_args.out_path);
    return 0;
  }

  if (rate->parsed()) {
    GWModel model = load_model_file(rate_args.model_path);
    SpectralReport spectral = analyze(model);
    OffspringMeasure rho = resolve_measure(rate_rho, model, spectral.eigenvector);
    KullbackResult result = kullback_action(spectral.eigenvector, model, rho, rate_gate);
    emit(kullback_to_json(result, rate_bits), rate_args.out_path);
    return 0;
  }

  if (dual->parsed()) {
    GWModel model = load_model_file(dual_args.model_path);
    SpectralReport spectral = analyze(model);
    OffspringMeasure rho = resolve_measure(dual_rho, model, spectral.eigenvector);
    DualSolution solution = dual_value(spectral.eigenvector, model, rho, dual_settings);
    emit(dual_to_json(solution, model, dual_bits), dual_args.out_path);
    return 0;
  }

  if (sample->parsed()) {
    GWModel model = load_model_file(sample_args.model_path);
    RandomSource rng(sample_seed);
    std::ostringstream lines;
    long attempts = 0;
    double acceptance = 0.0;
    for (long i = 0; i < sample_draws; ++i) {
      ConditionedSample draw = sample_conditioned(model, sample_n, rng, sample_attempts);
      acceptance = draw.acceptance_probability;
      attempts += draw.attempts;
      if (draw.status == ConditionedStatus::ImpossibleSize) {
        throw ValidationError("impossible_size",
                              "no tree of size " + std::to_string(sample_n) + " exists");
      }
      if (draw.status == ConditionedStatus::Exhausted) {
        throw ComputeError("exhausted",
                           "rejection budget ran out at draw " + std::to_string(i));
      }
      lines << encode_tree(*draw.tree, model) << '\n';
    }
    if (!sample_args.out_path.empty()) write_text_file(sample_args.out_path, lines.str());
    ordered_json summary;
    summary["count"] = sample_draws;
    summary["attempts"] = attempts;
    summary["acceptance_probability"] = acceptance;
    summary["seed"] = sample_seed;
    std::cout << summary.dump(2) << "\n";
    return 0;
  }

  if (tilts->parsed()) {
    GWModel model = load_model_file(tilt_args.model_path);
    TestFunction g;
    if (!tilt_g_path.empty()) g = load_test_function_file(tilt_g_path, model);
    TiltedModel tilted;
    if (tilt_root == "stationary") {
      SpectralReport spectral = analyze(model);
      tilted = tilt(model, g, spectral.eigenvector);
    } else {
      tilted = tilt(model, g);
    }
    RandomSource rng(tilt_seed);
    std::ostringstream lines;
    long overflows = 0;
    for (long i = 0; i < tilt_draws; ++i) {
      auto draw = sample_tilted(tilted, rng, tilt_cap);
      if (!draw) {
        ++overflows;
        continue;
      }
      ordered_json line;
      line["tree"] = ordered_json::parse(encode_tree(draw->tree, model));
      line["log_weight"] = draw->log_weight;
      line["root_log_weight"] = draw->root_log_weight;
      lines << line.dump() << '\n';
    }
    if (!tilt_args.out_path.empty()) write_text_file(tilt_args.out_path, lines.str());
    ordered_json summary;
    summary["count"] = tilt_draws;
    summary["overflows"] = overflows;
    summary["seed"] = tilt_seed;
    std::cout << summary.dump(2) << "\n";
    return 0;
  }

  if (enumerate->parsed()) {
    GWModel model = load_model_file(enum_args.model_path);
    std::uint64_t budget = enum_budget > 0 ? enum_budget : default_budget();
    TreeCensus census = enumerate_trees(model, enum_n, budget);
    if (!enum_args.out_path.empty()) {
      write_text_file(enum_args.out_path, census_to_jsonl(census, model));
    }
    ordered_json summary;
    summary["size"] = census.size;
    summary["trees"] = census.entries.size();
    summary["total_probability"] = census.total_probability;
    std::cout << summary.dump(2) << "\n";
    return 0;
  }

  if (count->parsed()) {
    GWModel model = load_model_file(count_args.model_path);
    LeafPolicy policy =
        count_policy == "free" ? LeafPolicy::AllowUnsupported : LeafPolicy::RequireSupported;
    auto counts = count_census_range(model, count_nmax, policy);
    SizeDistribution dist = exact_size_distribution(model, count_nmax);
    emit(counts_to_csv(counts, dist), count_args.out_path);
    return 0;
  }

  if (lldp->parsed()) {
    GWModel model = load_model_file(lldp_args.model_path);
    SpectralReport spectral = analyze(model, 1e-12, lldp_options.band);
    OffspringMeasure rho = resolve_measure(lldp_rho, model, spectral.eigenvector);
    BallSpec ball = parse_ball_spec(lldp_ball);
    if (!ball.center.empty()) {
      throw ValidationError("bad_ball", "verify-lldp centers the ball at --rho");
    }
    lldp_options.sizes = parse_sizes(lldp_sizes);
    lldp_options.seed = lldp_seed;
    lldp_options.budget = lldp_budget > 0 ? lldp_budget : default_budget();
    RateReport report =
        verify_lldp(model, rho, WeakNeighborhood::l1_ball(rho, ball.radius), lldp_options);
    emit_with_csv(rate_report_to_json(report), rate_report_to_csv(report), lldp_args.out_path);
    return 0;
  }

  if (mcm->parsed()) {
    GWModel model = load_model_file(mcm_args.model_path);
    if (mcm_nmax < 1) throw ValidationError("bad_sizes", "--n-max must be at least 1");
    std::vector<int> sizes(static_cast<std::size_t>(mcm_nmax));
    std::iota(sizes.begin(), sizes.end(), 1);
    McMillanReport report = verify_mcmillan(model, sizes, mcm_band);
    emit_with_csv(mcmillan_to_json(report, mcm_bits), mcmillan_to_csv(report, mcm_bits),
                  mcm_args.out_path);
    return 0;
  }

  if (dual_verify->parsed()) {
    GWModel model = load_model_file(dual_verify_args.model_path);
    DualitySummary summary = verify_duality(model, trials, duality_seed, duality_settings);
    emit(duality_to_json(summary, duality_bits), dual_verify_args.out_path);
    return 0;
  }

  if (ldp->parsed()) {
    GWModel model = load_model_file(ldp_args.model_path);
    SpectralReport spectral = analyze(model, 1e-12, ldp_options.band);
    std::vector<WeakNeighborhood> cells;
    for (const auto& spec : ldp_cells) {
      BallSpec ball = parse_ball_spec(spec);
      if (ball.center.empty()) {
        throw ValidationError("bad_ball", "verify-ldp cells need an explicit center");
      }
      cells.push_back(WeakNeighborhood::l1_ball(
          resolve_measure(ball.center, model, spectral.eigenvector), ball.radius));
    }
    ldp_options.sizes = parse_sizes(ldp_sizes);
    ldp_options.seed = ldp_seed;
    ldp_options.budget = ldp_budget > 0 ? ldp_budget : default_budget();
    LdpReport report = verify_ldp_bounds(model, std::move(cells), ldp_options);
    emit_with_csv(ldp_to_json(report), ldp_to_csv(report), ldp_args.out_path);
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ValidationError& e) {
    ordered_json err;
    err["error"] = e.code();
    err["detail"] = e.detail();
    std::cerr << err.dump() << "\n";
    return 1;
  } catch (const ComputeError& e) {
    ordered_json err;
    err["error"] = e.code();
    err["detail"] = e.detail();
    std::cerr << err.dump() << "\n";
    return 2;
  } catch (const std::exception& e) {
    ordered_json err;
    err["error"] = "internal";
    err["detail"] = e.what();
    std::cerr << err.dump() << "\n";
    return 2;
  }
}
