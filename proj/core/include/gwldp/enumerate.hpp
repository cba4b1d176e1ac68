#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "gwldp/measure.hpp"
#include "gwldp/model.hpp"
#include "gwldp/neighborhood.hpp"
#include "gwldp/tree.hpp"
#include "gwldp/types.hpp"

namespace gwldp {

using BigCount = boost::multiprecision::cpp_int;

// Exact law of the total progeny. by_root_type[a][n] is the probability that
// a tree rooted at type a has exactly n vertices; overall[n] mixes the roots
// by the root law. Index 0 is unused.
struct SizeDistribution {
  int n_max = 0;
  std::vector<std::vector<double>> by_root_type;
  std::vector<double> overall;

  double q(int n) const { return overall[static_cast<std::size_t>(n)]; }
};

// Dynamic program over total progeny, quadratic in n_max per kernel entry.
SizeDistribution exact_size_distribution(const GWModel& model, int n_max);

// Whether counting admits the empty configuration at every vertex even when
// the kernel gives leaves zero probability. RequireSupported matches the
// probabilistic censuses; AllowUnsupported counts the combinatorial trees
// whose internal vertices follow the support, which is the object whose
// growth rate the entropy exponent describes.
enum class LeafPolicy { RequireSupported, AllowUnsupported };

// Exact number of size-n trees whose vertices realize supported
// configurations, counted by the same recursion as the size distribution but
// over integers. counts[n] covers every root type with positive root mass.
std::vector<BigCount> count_census_range(const GWModel& model, int n_max,
                                         LeafPolicy policy = LeafPolicy::RequireSupported);
BigCount count_census(const GWModel& model, int n,
                      LeafPolicy policy = LeafPolicy::RequireSupported);

struct CensusEntry {
  TypedTree tree;
  double probability;       // root law times kernel factors
  OffspringMeasure measure;  // empirical offspring measure of the tree
};

struct TreeCensus {
  int size = 0;
  std::vector<CensusEntry> entries;
  double total_probability = 0.0;  // equals the exact size distribution at n
};

// Materialized census of every size-n tree with positive probability,
// enumerated in canonical order (root types in alphabet order, then kernel
// support order depth-first). Throws ComputeError("budget_exceeded") when
// the counting program predicts more than `budget` trees.
TreeCensus enumerate_trees(const GWModel& model, int n, std::uint64_t budget = 10000000);

// Streaming form: calls visit(tree, probability) per tree without holding
// the census in memory. Same order and budget guard as enumerate_trees.
void for_each_tree(const GWModel& model, int n, std::uint64_t budget,
                   const std::function<void(const TypedTree&, double)>& visit);

// Exact conditional probability that the empirical offspring measure of a
// size-n tree lies in the neighborhood, by full enumeration. Throws
// ValidationError("impossible_size") when no size-n tree exists.
double exact_event_probability(const GWModel& model, int n, const WeakNeighborhood& hood,
                               std::uint64_t budget = 10000000);

}  // namespace gwldp
