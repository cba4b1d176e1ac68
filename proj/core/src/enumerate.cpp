#include "gwldp/enumerate.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "gwldp/errors.hpp"
#include "gwldp/math_util.hpp"

namespace gwldp {

namespace {

// Core recursion over total progeny, shared by the probability and counting
// programs. values[a][n] accumulates over kernel entries the weight of the
// entry times the number of ways to split n-1 vertices among its children.
// Prefix-convolution tables are filled size by size so each cell is computed
// once.
template <class V, class LeafFn, class WeightFn>
std::vector<std::vector<V>> progeny_dp(const GWModel& model, int n_max, LeafFn leaf,
                                       WeightFn weight) {
  const int k = model.type_count();
  std::vector<std::vector<V>> p(static_cast<std::size_t>(k),
                                std::vector<V>(static_cast<std::size_t>(n_max) + 1, V(0)));
  if (n_max < 1) return p;
  for (TypeId a = 0; a < k; ++a) p[static_cast<std::size_t>(a)][1] = leaf(a);

  struct Table {
    TypeId parent;
    const KernelEntry* entry;
    // conv[j][s]: weight of splitting s vertices among the first j children,
    // each child subtree nonempty. conv[0][0] = 1.
    std::vector<std::vector<V>> conv;
  };
  std::vector<Table> tables;
  for (TypeId a = 0; a < k; ++a) {
    for (const auto& e : model.offspring_row(a)) {
      if (e.config.leaf()) continue;
      Table t{a, &e,
              std::vector<std::vector<V>>(static_cast<std::size_t>(e.config.size()) + 1,
                                          std::vector<V>(static_cast<std::size_t>(n_max), V(0)))};
      t.conv[0][0] = V(1);
      tables.push_back(std::move(t));
    }
  }

  for (int n = 2; n <= n_max; ++n) {
    const int s = n - 1;
    for (auto& t : tables) {
      const int m = t.entry->config.size();
      for (int j = 1; j <= std::min(m, s); ++j) {
        V acc(0);
        const auto& child_row =
            p[static_cast<std::size_t>(t.entry->config.children[static_cast<std::size_t>(j - 1)])];
        const auto& prev = t.conv[static_cast<std::size_t>(j - 1)];
        for (int i = 1; i <= s - (j - 1); ++i) {
          const V& left = prev[static_cast<std::size_t>(s - i)];
          if (left != 0) acc += left * child_row[static_cast<std::size_t>(i)];
        }
        t.conv[static_cast<std::size_t>(j)][static_cast<std::size_t>(s)] = std::move(acc);
      }
      if (s >= m) {
        p[static_cast<std::size_t>(t.parent)][static_cast<std::size_t>(n)] +=
            weight(*t.entry) * t.conv[static_cast<std::size_t>(m)][static_cast<std::size_t>(s)];
      }
    }
  }
  return p;
}

std::vector<std::vector<BigCount>> progeny_counts(const GWModel& model, int n_max,
                                                  LeafPolicy policy) {
  return progeny_dp<BigCount>(
      model, n_max,
      [&](TypeId a) -> BigCount {
        if (policy == LeafPolicy::AllowUnsupported) return 1;
        return model.supports(a, OffspringConfig{}) ? 1 : 0;
      },
      [](const KernelEntry&) -> BigCount { return 1; });
}

void check_size(int n) {
  if (n < 1) throw ValidationError("impossible_size", "tree sizes start at one vertex");
}

}  // namespace

SizeDistribution exact_size_distribution(const GWModel& model, int n_max) {
  check_size(n_max);
  SizeDistribution d;
  d.n_max = n_max;
  d.by_root_type = progeny_dp<double>(
      model, n_max,
      [&](TypeId a) { return model.kernel_probability(a, OffspringConfig{}); },
      [](const KernelEntry& e) { return e.probability; });
  d.overall.assign(static_cast<std::size_t>(n_max) + 1, 0.0);
  for (int n = 1; n <= n_max; ++n) {
    KahanSum s;
    for (TypeId a = 0; a < model.type_count(); ++a) {
      s.add(model.root_probability(a) * d.by_root_type[static_cast<std::size_t>(a)][static_cast<std::size_t>(n)]);
    }
    d.overall[static_cast<std::size_t>(n)] = s.value();
  }
  return d;
}

std::vector<BigCount> count_census_range(const GWModel& model, int n_max, LeafPolicy policy) {
  check_size(n_max);
  auto per_type = progeny_counts(model, n_max, policy);
  std::vector<BigCount> out(static_cast<std::size_t>(n_max) + 1, BigCount(0));
  for (int n = 1; n <= n_max; ++n) {
    for (TypeId a = 0; a < model.type_count(); ++a) {
      if (model.root_probability(a) > 0.0) {
        out[static_cast<std::size_t>(n)] += per_type[static_cast<std::size_t>(a)][static_cast<std::size_t>(n)];
      }
    }
  }
  return out;
}

BigCount count_census(const GWModel& model, int n, LeafPolicy policy) {
  return count_census_range(model, n, policy)[static_cast<std::size_t>(n)];
}

namespace {

struct GenNode {
  TypeId type = 0;
  std::vector<GenNode> kids;
};

TypedTree flatten(const GenNode& root) {
  TypedTree t(root.type);
  std::vector<const GenNode*> order{&root};
  for (std::size_t v = 0; v < order.size(); ++v) {
    for (const GenNode& kid : order[v]->kids) {
      t.add_child(static_cast<int>(v), kid.type);
      order.push_back(&kid);
    }
  }
  return t;
}

// Streaming generator. Continuations are type-erased so the recursion depth
// is bounded by the tree size, not by template nesting. Compositions are
// pruned with the exact counting tables, so every recursive branch emits at
// least one tree. Direct products keep the census totals exact; the
// accumulator switches to summed logs when some kernel mass is small enough
// for products to underflow first.
class TreeStream {
 public:
  TreeStream(const GWModel& model, const std::vector<std::vector<BigCount>>& counts,
             bool log_domain, const std::function<void(const TypedTree&, double)>& visit)
      : model_(model), counts_(counts), log_domain_(log_domain), visit_(visit) {}

  void run(int n) {
    for (TypeId a = 0; a < model_.type_count(); ++a) {
      double beta = model_.root_probability(a);
      if (beta <= 0.0) continue;
      if (counts_[static_cast<std::size_t>(a)][static_cast<std::size_t>(n)] == 0) continue;
      subtree(a, n, root_, log_domain_ ? std::log(beta) : beta, [this](double p) {
        visit_(flatten(root_), log_domain_ ? std::exp(p) : p);
      });
    }
  }

 private:
  double combine(double acc, double factor) const {
    return log_domain_ ? acc + std::log(factor) : acc * factor;
  }

  void subtree(TypeId a, int s, GenNode& node, double prob,
               const std::function<void(double)>& done) {
    node.type = a;
    for (const auto& e : model_.offspring_row(a)) {
      const int m = e.config.size();
      if (m == 0) {
        if (s == 1) {
          node.kids.clear();
          done(combine(prob, e.probability));
        }
        continue;
      }
      if (s - 1 < m) continue;
      node.kids.assign(static_cast<std::size_t>(m), GenNode{});
      children(e.config.children, 0, s - 1, node, combine(prob, e.probability), done);
    }
  }

  void children(const std::vector<TypeId>& types, std::size_t j, int remaining, GenNode& node,
                double prob, const std::function<void(double)>& done) {
    if (j == types.size()) {
      if (remaining == 0) done(prob);
      return;
    }
    const int slots_after = static_cast<int>(types.size() - j) - 1;
    const TypeId child = types[j];
    const auto& child_counts = counts_[static_cast<std::size_t>(child)];
    for (int nj = 1; nj <= remaining - slots_after; ++nj) {
      if (child_counts[static_cast<std::size_t>(nj)] == 0) continue;
      subtree(child, nj, node.kids[j], prob, [&, nj](double p) {
        children(types, j + 1, remaining - nj, node, p, done);
      });
    }
  }

  const GWModel& model_;
  const std::vector<std::vector<BigCount>>& counts_;
  bool log_domain_;
  const std::function<void(const TypedTree&, double)>& visit_;
  GenNode root_;
};

bool needs_log_domain(const GWModel& model) {
  for (TypeId a = 0; a < model.type_count(); ++a) {
    for (const auto& e : model.offspring_row(a)) {
      if (e.probability < 1e-12) return true;
    }
    if (model.root_probability(a) > 0.0 && model.root_probability(a) < 1e-12) return true;
  }
  return false;
}

std::vector<std::vector<BigCount>> counts_with_budget(const GWModel& model, int n,
                                                      std::uint64_t budget) {
  auto counts = progeny_counts(model, n, LeafPolicy::RequireSupported);
  BigCount total = 0;
  for (TypeId a = 0; a < model.type_count(); ++a) {
    if (model.root_probability(a) > 0.0) {
      total += counts[static_cast<std::size_t>(a)][static_cast<std::size_t>(n)];
    }
  }
  if (total > BigCount(budget)) {
    std::ostringstream msg;
    msg << "census at size " << n << " holds " << total << " trees, over the budget of " << budget;
    throw ComputeError("budget_exceeded", msg.str());
  }
  return counts;
}

}  // namespace

void for_each_tree(const GWModel& model, int n, std::uint64_t budget,
                   const std::function<void(const TypedTree&, double)>& visit) {
  check_size(n);
  auto counts = counts_with_budget(model, n, budget);
  TreeStream stream(model, counts, needs_log_domain(model), visit);
  stream.run(n);
}

TreeCensus enumerate_trees(const GWModel& model, int n, std::uint64_t budget) {
  TreeCensus census;
  census.size = n;
  KahanSum total;
  for_each_tree(model, n, budget, [&](const TypedTree& tree, double p) {
    census.entries.push_back(CensusEntry{tree, p, empirical_offspring_measure(tree)});
    total.add(p);
  });
  census.total_probability = total.value();
  return census;
}

double exact_event_probability(const GWModel& model, int n, const WeakNeighborhood& hood,
                               std::uint64_t budget) {
  check_size(n);
  if (count_census(model, n) == 0) {
    throw ValidationError("impossible_size",
                          "no tree of size " + std::to_string(n) + " has positive probability");
  }
  KahanSum hit;
  KahanSum all;
  for_each_tree(model, n, budget, [&](const TypedTree& tree, double p) {
    all.add(p);
    if (hood.contains(empirical_offspring_measure(tree))) hit.add(p);
  });
  return hit.value() / all.value();
}

}  // namespace gwldp
