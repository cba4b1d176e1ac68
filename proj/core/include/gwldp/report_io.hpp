#pragma once

#include <string>
#include <vector>

#include "gwldp/enumerate.hpp"
#include "gwldp/experiments.hpp"
#include "gwldp/kullback.hpp"
#include "gwldp/model.hpp"
#include "gwldp/spectral.hpp"

namespace gwldp {

// All serializers return complete file contents. Key order and float
// formatting are fixed, so identical inputs give identical bytes.

std::string to_string(KullbackGate gate);
std::string to_string(DualStatus status);

// `bits` divides entropy-valued fields by log 2 at this layer only; the
// library computes in nats throughout.
std::string spectral_to_json(const SpectralReport& report, const GWModel& model);
std::string kullback_to_json(const KullbackResult& result, bool bits = false);
std::string dual_to_json(const DualSolution& solution, const GWModel& model, bool bits = false);

std::string rate_report_to_json(const RateReport& report);
std::string rate_report_to_csv(const RateReport& report);

std::string mcmillan_to_json(const McMillanReport& report, bool bits = false);
std::string mcmillan_to_csv(const McMillanReport& report, bool bits = false);

std::string duality_to_json(const DualitySummary& summary, bool bits = false);

std::string ldp_to_json(const LdpReport& report);
std::string ldp_to_csv(const LdpReport& report);

// One line per tree: the nested-array encoding by itself.
std::string census_to_jsonl(const TreeCensus& census, const GWModel& model);

// Columns n,count,q_n over 1..n_max.
std::string counts_to_csv(const std::vector<BigCount>& counts, const SizeDistribution& dist);

// Shortest round-trip decimal form of a double; "inf", "-inf", "nan" spelled
// out. Used by every CSV writer.
std::string format_double(double x);

}  // namespace gwldp
