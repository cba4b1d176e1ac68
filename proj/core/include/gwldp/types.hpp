#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <vector>

namespace gwldp {

// Index into a model's type alphabet.
using TypeId = std::int32_t;

// Ordered offspring configuration: the types of one vertex's children, left
// to right. The empty configuration is the unique leaf configuration.
struct OffspringConfig {
  std::vector<TypeId> children;

  OffspringConfig() = default;
  OffspringConfig(std::initializer_list<TypeId> types) : children(types) {}
  explicit OffspringConfig(std::vector<TypeId> types) : children(std::move(types)) {}

  int size() const { return static_cast<int>(children.size()); }
  bool leaf() const { return children.empty(); }
  auto operator<=>(const OffspringConfig&) const = default;
};

// Number of children of type `a` inside configuration `c`.
inline int multiplicity(TypeId a, const OffspringConfig& c) {
  return static_cast<int>(std::count(c.children.begin(), c.children.end(), a));
}

// One (parent type, offspring configuration) pair: the index set shared by
// offspring measures and test functions.
struct Atom {
  TypeId parent = 0;
  OffspringConfig config;

  auto operator<=>(const Atom&) const = default;
};

}  // namespace gwldp
