#include "gwldp/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gwldp/errors.hpp"

namespace gwldp {

TypeId GWModel::type_index(std::string_view symbol) const {
  auto it = index_.find(symbol);
  return it == index_.end() ? TypeId{-1} : it->second;
}

double GWModel::kernel_probability(TypeId a, const OffspringConfig& c) const {
  const auto& row = kernel_[static_cast<std::size_t>(a)];
  auto it = std::lower_bound(row.begin(), row.end(), c,
                             [](const KernelEntry& e, const OffspringConfig& key) {
                               return e.config < key;
                             });
  if (it == row.end() || it->config != c) return 0.0;
  return it->probability;
}

bool GWModel::supports(TypeId a, const OffspringConfig& c) const {
  return kernel_probability(a, c) > 0.0;
}

GWModel validate_model(RawModel raw) {
  if (raw.alphabet.empty()) {
    throw ValidationError("empty_alphabet", "a model needs at least one type");
  }

  GWModel m;
  m.alphabet_ = std::move(raw.alphabet);
  for (std::size_t i = 0; i < m.alphabet_.size(); ++i) {
    auto [it, fresh] = m.index_.emplace(m.alphabet_[i], static_cast<TypeId>(i));
    if (!fresh) {
      throw ValidationError("duplicate_type", "type '" + m.alphabet_[i] + "' appears twice");
    }
  }

  const auto k = m.alphabet_.size();
  if (raw.root_law.size() != k) {
    throw ValidationError("bad_root_law", "root law must assign a probability to every type");
  }
  double root_mass = 0.0;
  for (double p : raw.root_law) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw ValidationError("bad_root_law", "root probabilities must be finite and nonnegative");
    }
    root_mass += p;
  }
  if (std::abs(root_mass - 1.0) > 1e-9) {
    throw ValidationError("bad_root_law",
                          "root law mass " + std::to_string(root_mass) + " is not 1");
  }
  m.root_law_ = std::move(raw.root_law);
  for (double& p : m.root_law_) p /= root_mass;

  if (raw.kernel.size() != k) {
    throw ValidationError("empty_support", "kernel must have one row per type");
  }
  m.kernel_.resize(k);
  for (std::size_t a = 0; a < k; ++a) {
    auto& row = raw.kernel[a];
    if (row.empty()) {
      throw ValidationError("empty_support",
                            "type '" + m.alphabet_[a] + "' has no offspring configurations");
    }
    std::sort(row.begin(), row.end(),
              [](const KernelEntry& x, const KernelEntry& y) { return x.config < y.config; });
    double mass = 0.0;
    for (std::size_t i = 0; i < row.size(); ++i) {
      const auto& e = row[i];
      for (TypeId t : e.config.children) {
        if (t < 0 || static_cast<std::size_t>(t) >= k) {
          throw ValidationError("unknown_type", "configuration refers to a type outside the alphabet");
        }
      }
      if (!(e.probability >= 0.0) || !std::isfinite(e.probability)) {
        throw ValidationError("negative_probability",
                              "kernel probabilities must be finite and nonnegative");
      }
      if (i > 0 && row[i - 1].config == e.config) {
        throw ValidationError("duplicate_config",
                              "type '" + m.alphabet_[a] + "' lists a configuration twice");
      }
      mass += e.probability;
    }
    if (std::abs(mass - 1.0) > 1e-9) {
      throw ValidationError("non_stochastic_kernel",
                            "offspring row for type '" + m.alphabet_[a] + "' has mass " +
                                std::to_string(mass));
    }
    // Drop exact-zero entries, renormalize the rest so each row sums to 1.
    std::vector<KernelEntry> clean;
    clean.reserve(row.size());
    for (auto& e : row) {
      if (e.probability > 0.0) {
        e.probability /= mass;
        m.max_branch_ = std::max(m.max_branch_, e.config.size());
        clean.push_back(std::move(e));
      }
    }
    if (clean.empty()) {
      throw ValidationError("empty_support",
                            "type '" + m.alphabet_[a] + "' has no positive-probability configuration");
    }
    m.kernel_[a] = std::move(clean);
  }
  return m;
}

}  // namespace gwldp
