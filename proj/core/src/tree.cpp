#include "gwldp/tree.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace gwldp {

int TypedTree::add_child(int parent, TypeId type) {
  int id = vertex_count();
  vertices_.push_back(Vertex{type, {}});
  vertices_[static_cast<std::size_t>(parent)].children.push_back(id);
  return id;
}

OffspringConfig TypedTree::config_at(int v) const {
  const auto& vx = vertices_[static_cast<std::size_t>(v)];
  OffspringConfig c;
  c.children.reserve(vx.children.size());
  for (int child : vx.children) {
    c.children.push_back(vertices_[static_cast<std::size_t>(child)].type);
  }
  return c;
}

OffspringMeasure empirical_offspring_measure(const TypedTree& tree) {
  OffspringMeasure m;
  const double w = 1.0 / static_cast<double>(tree.vertex_count());
  for (int v = 0; v < tree.vertex_count(); ++v) {
    m.add(tree.vertex(v).type, tree.config_at(v), w);
  }
  return m;
}

bool consistent_with(const TypedTree& tree, const GWModel& model) {
  for (int v = 0; v < tree.vertex_count(); ++v) {
    if (!model.supports(tree.vertex(v).type, tree.config_at(v))) return false;
  }
  return true;
}

double log_base_probability(const TypedTree& tree, const GWModel& model) {
  double root = model.root_probability(tree.root_type());
  if (root <= 0.0) return -std::numeric_limits<double>::infinity();
  double log_p = std::log(root);
  for (int v = 0; v < tree.vertex_count(); ++v) {
    double p = model.kernel_probability(tree.vertex(v).type, tree.config_at(v));
    if (p <= 0.0) return -std::numeric_limits<double>::infinity();
    log_p += std::log(p);
  }
  return log_p;
}

namespace {

void encode_vertex(const TypedTree& tree, const GWModel& model, int v, std::ostream& out) {
  out << "[\"" << model.symbol(tree.vertex(v).type) << "\",[";
  const auto& kids = tree.vertex(v).children;
  for (std::size_t i = 0; i < kids.size(); ++i) {
    if (i > 0) out << ',';
    encode_vertex(tree, model, kids[i], out);
  }
  out << "]]";
}

}  // namespace

std::string encode_tree(const TypedTree& tree, const GWModel& model) {
  std::ostringstream out;
  encode_vertex(tree, model, 0, out);
  return out.str();
}

}  // namespace gwldp
