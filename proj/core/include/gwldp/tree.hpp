#pragma once

#include <string>
#include <vector>

#include "gwldp/measure.hpp"
#include "gwldp/model.hpp"
#include "gwldp/types.hpp"

namespace gwldp {

// Finite rooted planar tree with one type per vertex. Vertex 0 is the root
// and children are ordered left to right; vertex ids follow insertion order.
class TypedTree {
 public:
  struct Vertex {
    TypeId type = 0;
    std::vector<int> children;
  };

  explicit TypedTree(TypeId root_type) : vertices_{Vertex{root_type, {}}} {}

  int add_child(int parent, TypeId type);

  int vertex_count() const { return static_cast<int>(vertices_.size()); }
  const Vertex& vertex(int v) const { return vertices_[static_cast<std::size_t>(v)]; }
  TypeId root_type() const { return vertices_.front().type; }

  // The offspring configuration realized at vertex v.
  OffspringConfig config_at(int v) const;

 private:
  std::vector<Vertex> vertices_;
};

// Empirical offspring measure: mass 1/|V| on (type, configuration) of every
// vertex. Always a probability measure with shift defect at most 2/|V|.
OffspringMeasure empirical_offspring_measure(const TypedTree& tree);

// True when every vertex realizes a configuration in the kernel support of
// its type.
bool consistent_with(const TypedTree& tree, const GWModel& model);

// log root_law(root) + sum over vertices of log kernel(config | type).
// -infinity when the tree is not consistent with the model.
double log_base_probability(const TypedTree& tree, const GWModel& model);

// One-line recursive encoding ["a",[child,...]] used by the tree stream
// format, children in planar order.
std::string encode_tree(const TypedTree& tree, const GWModel& model);

}  // namespace gwldp
