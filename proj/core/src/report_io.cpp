#include "gwldp/report_io.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "gwldp/model_io.hpp"
#include "gwldp/tree.hpp"

namespace gwldp {

namespace {

using ordered_json = nlohmann::ordered_json;

// Non-finite doubles serialize as JSON null; nlohmann does this by default,
// this wrapper just documents the intent.
ordered_json number_or_null(double x) {
  if (std::isnan(x) || std::isinf(x)) return nullptr;
  return x;
}

ordered_json labeled_vector(const std::vector<double>& v, const GWModel& model) {
  ordered_json out = ordered_json::object();
  for (TypeId a = 0; a < model.type_count(); ++a) {
    out[model.symbol(a)] = v[static_cast<std::size_t>(a)];
  }
  return out;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

std::string to_string(KullbackGate gate) {
  switch (gate) {
    case KullbackGate::Admissible: return "AbsContinuous";
    case KullbackGate::NotShiftInvariant: return "NotShiftInvariant";
    case KullbackGate::MarginalMismatch: return "MarginalMismatch";
    case KullbackGate::NotAbsolutelyContinuous: return "NotAbsolutelyContinuous";
  }
  return "Unknown";
}

std::string to_string(DualStatus status) {
  switch (status) {
    case DualStatus::Converged: return "Converged";
    case DualStatus::Diverging: return "Diverging";
    case DualStatus::IterationLimit: return "IterationLimit";
  }
  return "Unknown";
}

std::string spectral_to_json(const SpectralReport& report, const GWModel& model) {
  ordered_json j;
  j["eigenvalue"] = report.eigenvalue;
  j["eigenvector"] = labeled_vector(report.eigenvector, model);
  j["irreducible"] = report.irreducible;
  j["criticality"] = to_string(report.criticality);
  j["iterations"] = report.iterations;
  j["residual"] = report.residual;
  return dump(j);
}

namespace {

// Entropy-valued fields divide by log 2 under the bits flag; distances,
// tolerances and optimizer diagnostics stay as they are.
double unit_scale(bool bits) { return bits ? 1.0 / std::log(2.0) : 1.0; }
const char* unit_name(bool bits) { return bits ? "bits" : "nats"; }

ordered_json kullback_json(const KullbackResult& result, bool bits = false) {
  ordered_json j;
  j["value"] =
      result.finite() ? ordered_json(result.value * unit_scale(bits)) : ordered_json(nullptr);
  j["reason"] = to_string(result.gate);
  j["finite"] = result.finite();
  j["shift_defect"] = result.shift_defect;
  j["marginal_gap"] = result.marginal_gap;
  return j;
}

}  // namespace

std::string kullback_to_json(const KullbackResult& result, bool bits) {
  ordered_json j = kullback_json(result, bits);
  j["units"] = unit_name(bits);
  return dump(j);
}

std::string dual_to_json(const DualSolution& solution, const GWModel& model, bool bits) {
  ordered_json j;
  j["status"] = to_string(solution.status);
  j["value"] = number_or_null(solution.value * unit_scale(bits));
  j["units"] = unit_name(bits);
  j["iterations"] = solution.iterations;
  j["gradient_norm"] = solution.gradient_norm;
  ordered_json argmax = ordered_json::object();
  for (const auto& [atom, v] : solution.argmax.values()) {
    argmax[atom_key(atom, model)] = v;
  }
  j["argmax"] = argmax;
  return dump(j);
}

namespace {

ordered_json rate_rows_json(const std::vector<RateRow>& rows) {
  ordered_json out = ordered_json::array();
  for (const auto& row : rows) {
    ordered_json r;
    r["n"] = row.n;
    r["method"] = row.method;
    r["probability"] = number_or_null(row.probability);
    r["std_error"] = number_or_null(row.std_error);
    r["draws"] = row.draws;
    r["hits"] = row.hits;
    r["overflows"] = row.overflows;
    r["log_p_over_n"] = number_or_null(row.log_p_over_n);
    r["gap"] = number_or_null(row.gap);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

std::string rate_report_to_json(const RateReport& report) {
  ordered_json j;
  j["eigenvalue"] = report.spectral.eigenvalue;
  j["criticality"] = to_string(report.spectral.criticality);
  j["rate"] = kullback_json(report.rate);
  j["gate_tol"] = report.gate_tol;
  j["tilt_status"] = to_string(report.tilt_status);
  j["tilt_value"] = report.tilt_value;
  j["seed"] = report.seed;
  j["draws"] = report.draws;
  j["exact_size_limit"] = report.exact_size_limit;
  j["rows"] = rate_rows_json(report.rows);
  ordered_json fit;
  fit["fitted"] = report.fit.fitted;
  fit["a"] = report.fit.a;
  fit["b"] = report.fit.b;
  fit["max_abs_residual"] = report.fit.max_abs_residual;
  j["fit"] = fit;
  j["flag_tol"] = report.flag_tol;
  j["flagged_sizes"] = report.flagged_sizes;
  return dump(j);
}

std::string rate_report_to_csv(const RateReport& report) {
  std::ostringstream out;
  out << "n,method,probability,std_error,draws,hits,overflows,log_p_over_n,gap\n";
  for (const auto& row : report.rows) {
    out << row.n << ',' << row.method << ',' << format_double(row.probability) << ','
        << format_double(row.std_error) << ',' << row.draws << ',' << row.hits << ','
        << row.overflows << ',' << format_double(row.log_p_over_n) << ','
        << format_double(row.gap) << '\n';
  }
  return out.str();
}

std::string mcmillan_to_json(const McMillanReport& report, bool bits) {
  double s = unit_scale(bits);
  ordered_json j;
  j["target"] = report.target * s;
  j["units"] = unit_name(bits);
  j["final_relative_deviation"] = report.final_relative_deviation;
  ordered_json rows = ordered_json::array();
  for (const auto& row : report.rows) {
    ordered_json r;
    r["n"] = row.n;
    r["count"] = row.count.str();
    r["log_count"] = row.log_count * s;
    if (row.has_slope) {
      r["slope"] = row.slope * s;
      r["deviation"] = row.deviation * s;
    } else {
      r["slope"] = nullptr;
      r["deviation"] = nullptr;
    }
    rows.push_back(std::move(r));
  }
  j["rows"] = rows;
  return dump(j);
}

std::string mcmillan_to_csv(const McMillanReport& report, bool bits) {
  double s = unit_scale(bits);
  std::ostringstream out;
  out << "n,count,log_count,slope,deviation\n";
  for (const auto& row : report.rows) {
    out << row.n << ',' << row.count.str() << ',' << format_double(row.log_count * s) << ',';
    if (row.has_slope) {
      out << format_double(row.slope * s) << ',' << format_double(row.deviation * s);
    } else {
      out << ',';
    }
    out << '\n';
  }
  return out.str();
}

std::string duality_to_json(const DualitySummary& summary, bool bits) {
  double s = unit_scale(bits);
  ordered_json j;
  j["trials"] = summary.trials;
  j["seed"] = summary.seed;
  j["units"] = unit_name(bits);
  j["converged"] = summary.converged;
  j["failures"] = summary.failures;
  j["max_abs_gap"] = summary.max_abs_gap * s;
  j["mean_abs_gap"] = summary.mean_abs_gap * s;
  j["probe_entropy_infinite"] = summary.probe_entropy_infinite;
  j["probe_diverged"] = summary.probe_diverged;
  ordered_json rows = ordered_json::array();
  for (const auto& trial : summary.rows) {
    ordered_json r;
    r["index"] = trial.index;
    r["entropy"] = number_or_null(trial.entropy * s);
    r["dual"] = number_or_null(trial.dual * s);
    r["gap"] = number_or_null(trial.gap * s);
    r["iterations"] = trial.iterations;
    rows.push_back(std::move(r));
  }
  j["rows"] = rows;
  return dump(j);
}

std::string ldp_to_json(const LdpReport& report) {
  ordered_json j;
  j["inf_rate"] = number_or_null(report.inf_rate);
  j["slack"] = report.slack;
  j["seed"] = report.seed;
  ordered_json cells = ordered_json::array();
  for (const auto& cell : report.cells) {
    ordered_json c;
    c["radius"] = cell.hood.radius();
    c["rate"] = kullback_json(cell.rate);
    cells.push_back(std::move(c));
  }
  j["cells"] = cells;
  ordered_json rows = ordered_json::array();
  for (const auto& row : report.rows) {
    ordered_json r;
    r["n"] = row.n;
    r["method"] = row.method;
    r["probability"] = number_or_null(row.probability);
    r["std_error"] = number_or_null(row.std_error);
    r["log_p_over_n"] = number_or_null(row.log_p_over_n);
    r["lower_margin"] = number_or_null(row.lower_margin);
    r["upper_margin"] = number_or_null(row.upper_margin);
    rows.push_back(std::move(r));
  }
  j["rows"] = rows;
  return dump(j);
}

std::string ldp_to_csv(const LdpReport& report) {
  std::ostringstream out;
  out << "n,method,probability,std_error,log_p_over_n,lower_margin,upper_margin\n";
  for (const auto& row : report.rows) {
    out << row.n << ',' << row.method << ',' << format_double(row.probability) << ','
        << format_double(row.std_error) << ',' << format_double(row.log_p_over_n) << ','
        << format_double(row.lower_margin) << ',' << format_double(row.upper_margin) << '\n';
  }
  return out.str();
}

std::string census_to_jsonl(const TreeCensus& census, const GWModel& model) {
  std::ostringstream out;
  for (const auto& entry : census.entries) {
    out << encode_tree(entry.tree, model) << '\n';
  }
  return out.str();
}

std::string counts_to_csv(const std::vector<BigCount>& counts, const SizeDistribution& dist) {
  std::ostringstream out;
  out << "n,count,q_n\n";
  for (std::size_t n = 1; n < counts.size() && n < dist.overall.size(); ++n) {
    out << n << ',' << counts[n].str() << ',' << format_double(dist.overall[n]) << '\n';
  }
  return out.str();
}

}  // namespace gwldp
