// Exact progeny law, integer censuses against Catalan numbers and a naive
// recursive oracle, full enumeration, and exact event probabilities.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gwldp/enumerate.hpp"
#include "gwldp/errors.hpp"
#include "gwldp/tree.hpp"
#include "support/test_models.hpp"

using namespace gwldp;
using gwldp::testing::alternating_model;
using gwldp::testing::binary_model;
using gwldp::testing::two_type_model;
using gwldp::testing::unary_path_model;

namespace {

// Independent oracle: direct memoized recursion over ordered trees whose
// every vertex realizes a supported configuration.
struct NaiveCounter {
  const GWModel& model;
  std::map<std::pair<TypeId, int>, long long> memo;

  long long root(TypeId a, int n) {
    if (n < 1) return 0;
    auto key = std::make_pair(a, n);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    long long total = 0;
    for (const auto& entry : model.offspring_row(a)) {
      total += rest(entry.config, 0, n - 1);
    }
    memo[key] = total;
    return total;
  }

  long long rest(const OffspringConfig& c, std::size_t idx, int remaining) {
    if (idx == c.children.size()) return remaining == 0 ? 1 : 0;
    long long total = 0;
    for (int k = 1; k <= remaining; ++k) {
      long long left = root(c.children[idx], k);
      if (left == 0) continue;
      total += left * rest(c, idx + 1, remaining - k);
    }
    return total;
  }

  long long overall(int n) {
    long long total = 0;
    for (TypeId a = 0; a < model.type_count(); ++a) {
      if (model.root_probability(a) > 0.0) total += root(a, n);
    }
    return total;
  }
};

const long long kCatalan[] = {1, 1, 2, 5, 14, 42, 132, 429, 1430};

}  // namespace

TEST_CASE("binary progeny law matches the Catalan closed form") {
  SizeDistribution dist = exact_size_distribution(binary_model(), 17);
  for (int m = 0; m <= 8; ++m) {
    int n = 2 * m + 1;
    double expected = static_cast<double>(kCatalan[m]) * std::pow(0.5, n);
    CHECK(std::abs(dist.q(n) - expected) <= 1e-12);
  }
  for (int n = 2; n <= 16; n += 2) {
    CHECK(dist.q(n) == 0.0);
  }
}

TEST_CASE("two type progeny law satisfies its own recursion") {
  SizeDistribution dist = exact_size_distribution(two_type_model(), 12);
  const auto& a = dist.by_root_type[0];
  const auto& b = dist.by_root_type[1];
  CHECK(a[1] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(b[1] == 0.0);
  CHECK(b[3] == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(a[4] == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(dist.q(3) == doctest::Approx(0.125).epsilon(1e-15));
  for (int n = 1; n <= 12; ++n) {
    double mixed = 0.5 * a[static_cast<std::size_t>(n)] + 0.5 * b[static_cast<std::size_t>(n)];
    CHECK(dist.q(n) == doctest::Approx(mixed).epsilon(1e-15));
  }
}

TEST_CASE("binary census counts are Catalan numbers") {
  GWModel m = binary_model();
  auto counts = count_census_range(m, 17);
  for (int k = 0; k <= 8; ++k) {
    CHECK(counts[static_cast<std::size_t>(2 * k + 1)] == BigCount(kCatalan[k]));
  }
  for (int n = 2; n <= 16; n += 2) {
    CHECK(counts[static_cast<std::size_t>(n)] == 0);
  }
  CHECK(count_census(m, 17) == BigCount(kCatalan[8]));
  // Leaves are already supported, so the free leaf policy changes nothing.
  CHECK(count_census(m, 17, LeafPolicy::AllowUnsupported) == BigCount(kCatalan[8]));
}

TEST_CASE("census dynamic program agrees with the naive recursion") {
  for (const GWModel& m : {binary_model(), two_type_model(), alternating_model()}) {
    NaiveCounter naive{m, {}};
    auto counts = count_census_range(m, 11);
    for (int n = 1; n <= 11; ++n) {
      CHECK(counts[static_cast<std::size_t>(n)] == BigCount(naive.overall(n)));
    }
  }
}

TEST_CASE("leaf policy separates probabilistic and combinatorial censuses") {
  GWModel path = unary_path_model();
  for (int n = 1; n <= 6; ++n) {
    CHECK(count_census(path, n) == 0);
    CHECK(count_census(path, n, LeafPolicy::AllowUnsupported) == 1);
  }

  GWModel alt = alternating_model();
  CHECK(count_census(alt, 2) == 0);
  CHECK(count_census(alt, 3) == 1);
  CHECK(count_census(alt, 2, LeafPolicy::AllowUnsupported) == 1);
}

TEST_CASE("size seven binary census lists five trees with one empirical measure") {
  GWModel m = binary_model();
  TreeCensus census = enumerate_trees(m, 7);
  REQUIRE(census.entries.size() == 5);
  CHECK(census.size == 7);
  CHECK(census.total_probability == doctest::Approx(5.0 / 128.0).epsilon(1e-14));

  std::set<std::string> shapes;
  for (const auto& entry : census.entries) {
    CHECK(entry.tree.vertex_count() == 7);
    CHECK(entry.probability == doctest::Approx(1.0 / 128.0).epsilon(1e-14));
    CHECK(std::abs(std::log(entry.probability) -
                   log_base_probability(entry.tree, m)) <= 1e-12);
    CHECK(l1_distance(entry.measure, empirical_offspring_measure(entry.tree)) == 0.0);
    CHECK(entry.measure.at(0, OffspringConfig{}) == doctest::Approx(4.0 / 7.0).epsilon(1e-15));
    CHECK(entry.measure.at(0, OffspringConfig{0, 0}) ==
          doctest::Approx(3.0 / 7.0).epsilon(1e-15));
    shapes.insert(encode_tree(entry.tree, m));
  }
  CHECK(shapes.size() == 5);
}

TEST_CASE("streaming enumeration is deterministic and sums to the exact law") {
  GWModel m = binary_model();
  auto collect = [&m]() {
    std::vector<std::pair<std::string, double>> seen;
    for_each_tree(m, 9, 10000000, [&](const TypedTree& t, double p) {
      seen.emplace_back(encode_tree(t, m), p);
    });
    return seen;
  };
  auto first = collect();
  auto second = collect();
  CHECK(first.size() == 14);
  CHECK(first == second);

  double total = 0.0;
  for (const auto& [shape, p] : first) total += p;
  CHECK(total == doctest::Approx(14.0 / 512.0).epsilon(1e-14));
}

TEST_CASE("enumeration refuses censuses beyond the budget") {
  bool threw = false;
  try {
    enumerate_trees(binary_model(), 21, 100);
  } catch (const ComputeError& e) {
    threw = true;
    CHECK(e.code() == "budget_exceeded");
  }
  CHECK(threw);
}

TEST_CASE("exact event probability over balls and slabs") {
  GWModel m = binary_model();

  OffspringMeasure census_point;
  census_point.set(0, OffspringConfig{}, 4.0 / 7.0);
  census_point.set(0, OffspringConfig{0, 0}, 3.0 / 7.0);
  CHECK(exact_event_probability(m, 7, WeakNeighborhood::l1_ball(census_point, 1e-12)) == 1.0);

  OffspringMeasure product;
  product.set(0, OffspringConfig{}, 0.5);
  product.set(0, OffspringConfig{0, 0}, 0.5);
  // Every size seven tree sits at L1 distance 1/7 from the product measure.
  CHECK(exact_event_probability(m, 7, WeakNeighborhood::l1_ball(product, 1.0 / 7.0 + 1e-12)) ==
        1.0);
  CHECK(exact_event_probability(m, 7, WeakNeighborhood::l1_ball(product, 0.1)) == 0.0);

  TestFunction leaf_indicator;
  leaf_indicator.set(0, OffspringConfig{}, 1.0);
  auto slab = [&](double center, double half_width) {
    return WeakNeighborhood::slabs({FunctionalConstraint{leaf_indicator, center, half_width}});
  };
  CHECK(exact_event_probability(m, 7, slab(4.0 / 7.0, 0.01)) == 1.0);

  // Balls are closed and slabs are open, pinned at the exact stored weights:
  // a radius zero ball still contains its center, while a slab whose boundary
  // lands exactly on the realized pairing value excludes it. The 0.25 offset
  // subtracts exactly in binary floating point, so the boundary hit is exact.
  OffspringMeasure realized = enumerate_trees(m, 7).entries.front().measure;
  CHECK(exact_event_probability(m, 7, WeakNeighborhood::l1_ball(realized, 0.0)) == 1.0);
  double realized_leaf = pairing(leaf_indicator, realized);
  CHECK(exact_event_probability(m, 7, slab(realized_leaf - 0.25, 0.25)) == 0.0);
  CHECK_THROWS_AS(slab(realized_leaf, 0.0), ValidationError);

  CHECK_THROWS_AS(exact_event_probability(m, 2, slab(0.5, 1.0)), ValidationError);
  try {
    exact_event_probability(m, 2, slab(0.5, 1.0));
  } catch (const ValidationError& e) {
    CHECK(e.code() == "impossible_size");
  }
  try {
    exact_event_probability(two_type_model(), 5, slab(0.5, 1.0));
  } catch (const ValidationError& e) {
    CHECK(e.code() == "impossible_size");
  }
}

TEST_CASE("ball accessors expose shape for downstream reporting") {
  OffspringMeasure c;
  c.set(0, OffspringConfig{}, 1.0);
  WeakNeighborhood ball = WeakNeighborhood::l1_ball(c, 0.25);
  CHECK(ball.is_l1_ball());
  CHECK(ball.radius() == 0.25);
  CHECK(ball.center().at(0, OffspringConfig{}) == 1.0);

  WeakNeighborhood sl = WeakNeighborhood::slabs({});
  CHECK_FALSE(sl.is_l1_ball());
}
