#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "gwldp/types.hpp"

namespace gwldp {

struct KernelEntry {
  OffspringConfig config;
  double probability = 0.0;
};

// Unvalidated model description, as it arrives from a file or a test.
struct RawModel {
  std::vector<std::string> alphabet;
  std::vector<double> root_law;                  // aligned with alphabet
  std::vector<std::vector<KernelEntry>> kernel;  // one row per type
};

// Validated multitype branching model: finite type alphabet, root law, and a
// finitely supported offspring kernel per type. Immutable once built.
//
// Kernel rows are kept sorted by configuration; that order is the canonical
// support order used by samplers, enumerators and serializers.
class GWModel {
 public:
  int type_count() const { return static_cast<int>(alphabet_.size()); }
  const std::vector<std::string>& alphabet() const { return alphabet_; }
  const std::string& symbol(TypeId a) const { return alphabet_[static_cast<std::size_t>(a)]; }

  // Index of `symbol`, or -1 when the symbol is not in the alphabet.
  TypeId type_index(std::string_view symbol) const;

  double root_probability(TypeId a) const { return root_law_[static_cast<std::size_t>(a)]; }
  const std::vector<double>& root_law() const { return root_law_; }

  const std::vector<KernelEntry>& offspring_row(TypeId a) const {
    return kernel_[static_cast<std::size_t>(a)];
  }

  // Kernel probability of configuration `c` for a type-`a` parent; exact zero
  // off support.
  double kernel_probability(TypeId a, const OffspringConfig& c) const;
  bool supports(TypeId a, const OffspringConfig& c) const;

  // Largest configuration size in the kernel support.
  int max_branch() const { return max_branch_; }

 private:
  friend GWModel validate_model(RawModel raw);

  std::vector<std::string> alphabet_;
  std::map<std::string, TypeId, std::less<>> index_;
  std::vector<double> root_law_;
  std::vector<std::vector<KernelEntry>> kernel_;
  int max_branch_ = 0;
};

// Checks alphabet/root-law/kernel consistency and row stochasticity, then
// freezes the model. Probability rows within 1e-9 of total mass one are
// renormalized exactly; anything further off is rejected.
//
// Throws ValidationError with codes: empty_alphabet, duplicate_type,
// bad_root_law, unknown_type, empty_support, non_stochastic_kernel,
// negative_probability, duplicate_config.
GWModel validate_model(RawModel raw);

}  // namespace gwldp
