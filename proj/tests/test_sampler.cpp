// Deterministic random stream, rejection sampling against the exact progeny
// law, exponential tilting with exact importance weights, and the ratio-free
// importance estimator.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "gwldp/enumerate.hpp"
#include "gwldp/errors.hpp"
#include "gwldp/rng.hpp"
#include "gwldp/sampler.hpp"
#include "gwldp/tree.hpp"
#include "support/stats.hpp"
#include "support/test_models.hpp"

using namespace gwldp;
using gwldp::testing::alternating_model;
using gwldp::testing::binary_model;
using gwldp::testing::ternary_model;
using gwldp::testing::two_type_model;
using gwldp::testing::unary_path_model;

namespace {

// Log-density of the tree under the tilted kernel and root law.
double log_tilted_probability(const TiltedModel& tilted, const TypedTree& tree) {
  double log_p = std::log(tilted.root_law[static_cast<std::size_t>(tree.root_type())]);
  for (int v = 0; v < tree.vertex_count(); ++v) {
    OffspringConfig c = tree.config_at(v);
    double p = 0.0;
    for (const auto& entry : tilted.offspring_row(tree.vertex(v).type)) {
      if (entry.config == c) {
        p = entry.probability;
        break;
      }
    }
    REQUIRE(p > 0.0);
    log_p += std::log(p);
  }
  return log_p;
}

}  // namespace

TEST_CASE("random source replays one byte stream per seed") {
  RandomSource a(42);
  RandomSource b(42);
  for (int i = 0; i < 200; ++i) {
    double u = a.next_uniform();
    CHECK(u == b.next_uniform());
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }

  RandomSource base(42);
  RandomSource f1 = base.fork(7);
  RandomSource f2 = base.fork(7);
  RandomSource f3 = base.fork(8);
  double u1 = f1.next_uniform();
  CHECK(u1 == f2.next_uniform());
  CHECK(u1 != f3.next_uniform());
}

TEST_CASE("cdf inversion never selects zero-mass prefixes") {
  RandomSource rng(1);
  std::vector<double> cdf{0.0, 1.0};
  for (int i = 0; i < 1000; ++i) CHECK(rng.next_index(cdf) == 1);

  std::vector<double> mixed{0.25, 0.5, 1.0};
  std::vector<long> hits(3, 0);
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) hits[rng.next_index(mixed)] += 1;
  CHECK(std::abs(hits[0] / double(draws) - 0.25) < 0.01);
  CHECK(std::abs(hits[1] / double(draws) - 0.25) < 0.01);
  CHECK(std::abs(hits[2] / double(draws) - 0.50) < 0.01);
}

TEST_CASE("forward sampling produces consistent trees and respects the cap") {
  GWModel m = binary_model();
  RandomSource rng(2026);
  int closed = 0;
  for (int i = 0; i < 200; ++i) {
    auto tree = sample_tree(m, rng, 1000);
    if (!tree) continue;
    ++closed;
    CHECK(consistent_with(*tree, m));
    CHECK(tree->vertex_count() % 2 == 1);
  }
  CHECK(closed > 150);

  // The path model never closes, so every draw overflows.
  GWModel path = unary_path_model();
  RandomSource prng(3);
  for (int i = 0; i < 5; ++i) CHECK_FALSE(sample_tree(path, prng, 50).has_value());
}

TEST_CASE("conditioned sampling matches the exact law at small sizes") {
  GWModel m = binary_model();

  RandomSource rng(11);
  ConditionedSample one = sample_conditioned(m, 1, rng);
  REQUIRE(one.status == ConditionedStatus::Ok);
  CHECK(one.acceptance_probability == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(one.tree->vertex_count() == 1);

  ConditionedSample three = sample_conditioned(m, 3, rng);
  REQUIRE(three.status == ConditionedStatus::Ok);
  CHECK(three.acceptance_probability == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(encode_tree(*three.tree, m) == "[\"a\",[[\"a\",[]],[\"a\",[]]]]");

  ConditionedSample two = sample_conditioned(m, 2, rng);
  CHECK(two.status == ConditionedStatus::ImpossibleSize);
  CHECK_FALSE(two.tree.has_value());
  CHECK(two.acceptance_probability == 0.0);

  ConditionedSample five = sample_conditioned(two_type_model(), 5, rng);
  CHECK(five.status == ConditionedStatus::ImpossibleSize);
}

TEST_CASE("conditioned draws at size seven pass a chi-square fit over shapes") {
  GWModel m = binary_model();
  TreeCensus census = enumerate_trees(m, 7);
  REQUIRE(census.entries.size() == 5);

  std::map<std::string, long> observed;
  for (const auto& entry : census.entries) observed[encode_tree(entry.tree, m)] = 0;

  RandomSource rng(20260822);
  const int draws = 20000;
  for (int i = 0; i < draws; ++i) {
    ConditionedSample s = sample_conditioned(m, 7, rng);
    REQUIRE(s.status == ConditionedStatus::Ok);
    auto it = observed.find(encode_tree(*s.tree, m));
    REQUIRE(it != observed.end());
    it->second += 1;
  }

  // All five shapes are equally likely under the conditional law.
  double expected = draws / 5.0;
  double chi2 = 0.0;
  for (const auto& [shape, count] : observed) {
    double d = count - expected;
    chi2 += d * d / expected;
  }
  CHECK(gwldp::testing::chi_square_sf(chi2, 4) > 0.001);
}

TEST_CASE("conditioned sampling reports exhaustion against a tiny budget") {
  GWModel alt = alternating_model();
  RandomSource rng(5);
  // Size 41 has probability near 5e-7; one attempt will not find it.
  ConditionedSample s = sample_conditioned(alt, 41, rng, 1);
  CHECK(s.status == ConditionedStatus::Exhausted);
  CHECK(s.attempts == 1);
  CHECK_FALSE(s.tree.has_value());
  CHECK(s.acceptance_probability > 0.0);
  CHECK(s.acceptance_probability < 1e-5);
}

TEST_CASE("tilting reweights rows by exp g and keeps the support") {
  GWModel m = binary_model();
  TestFunction g;
  g.set(0, OffspringConfig{}, std::log(2.0));
  TiltedModel tilted = tilt(m, g);

  REQUIRE(tilted.kernel.size() == 1);
  REQUIRE(tilted.kernel[0].size() == 2);
  CHECK(tilted.log_normalizer[0] == doctest::Approx(std::log(1.5)).epsilon(1e-14));
  CHECK(tilted.kernel[0][0].config == OffspringConfig{});
  CHECK(tilted.kernel[0][0].probability == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(tilted.kernel[0][1].probability == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(tilted.root_law == m.root_law());

  // A tilt supported off the kernel has no effect on the tilted rows.
  TestFunction off;
  off.set(0, OffspringConfig{0}, 5.0);
  TiltedModel same = tilt(m, off);
  CHECK(same.log_normalizer[0] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(same.kernel[0][0].probability == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(same.kernel[0][1].probability == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("tilted draws carry exact telescoping weights") {
  GWModel m = binary_model();
  TestFunction g;
  g.set(0, OffspringConfig{}, std::log(2.0));
  TiltedModel tilted = tilt(m, g);

  RandomSource rng(77);
  int seen = 0;
  for (int i = 0; i < 200; ++i) {
    auto draw = sample_tilted(tilted, rng, 10000);
    if (!draw) continue;
    ++seen;
    CHECK(draw->root_log_weight == 0.0);
    double base_log = log_base_probability(draw->tree, m);
    double tilted_log = log_tilted_probability(tilted, draw->tree);
    CHECK(std::abs(base_log - (tilted_log + draw->total_log_weight())) <= 1e-10);
  }
  CHECK(seen == 200);  // leaf-favoring tilt is subcritical, every draw closes

  // The zero tilt is the identity with exactly zero weight.
  TiltedModel plain = tilt(m, TestFunction{});
  RandomSource rng2(78);
  auto draw = sample_tilted(plain, rng2, 10000);
  REQUIRE(draw.has_value());
  CHECK(draw->log_weight == 0.0);
  CHECK(draw->total_log_weight() == 0.0);
}

TEST_CASE("root law overrides are validated and priced into the weight") {
  GWModel m = two_type_model();
  TestFunction g;

  bool threw = false;
  try {
    tilt(m, g, {1.0, 0.0});  // base puts root mass on both types
  } catch (const ValidationError& e) {
    threw = true;
    CHECK(e.code() == "bad_root_law");
  }
  CHECK(threw);
  CHECK_THROWS_AS(tilt(m, g, {1.0}), ValidationError);

  TiltedModel tilted = tilt(m, g, {0.25, 0.75});
  RandomSource rng(9);
  for (int i = 0; i < 100; ++i) {
    auto draw = sample_tilted(tilted, rng, 10000);
    if (!draw) continue;
    double expected = draw->tree.root_type() == 0 ? std::log(0.5 / 0.25) : std::log(0.5 / 0.75);
    CHECK(draw->root_log_weight == doctest::Approx(expected).epsilon(1e-14));
    double base_log = log_base_probability(draw->tree, m);
    double tilted_log = log_tilted_probability(tilted, draw->tree);
    CHECK(std::abs(base_log - (tilted_log + draw->total_log_weight())) <= 1e-10);
  }
}

TEST_CASE("importance estimates are unbiased for exact size probabilities") {
  GWModel m = binary_model();
  SizeDistribution dist = exact_size_distribution(m, 9);

  TestFunction g;
  g.set(0, OffspringConfig{}, std::log(2.0));
  TiltedModel tilted = tilt(m, g);

  for (int n : {1, 3, 5, 7}) {
    RandomSource rng(1000 + static_cast<std::uint64_t>(n));
    auto event = [n](const TypedTree& t) { return t.vertex_count() == n; };
    ImportanceEstimate est = importance_estimate(tilted, event, 100000, rng, 1000);
    CHECK(est.draws == 100000);
    CHECK(est.std_error > 0.0);
    CHECK(std::abs(est.estimate - dist.q(n)) <= 4.0 * est.std_error);
  }

  // The plain model is the zero tilt; same estimator, wider error bars.
  TiltedModel plain = tilt(m, TestFunction{});
  RandomSource rng(55);
  auto event = [](const TypedTree& t) { return t.vertex_count() == 3; };
  ImportanceEstimate est = importance_estimate(plain, event, 100000, rng, 1000);
  CHECK(std::abs(est.estimate - 0.125) <= 4.0 * est.std_error);

  CHECK_THROWS_AS(importance_estimate(plain, event, 0, rng), ValidationError);
}
