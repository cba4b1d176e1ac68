#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "gwldp/model.hpp"
#include "gwldp/rng.hpp"
#include "gwldp/test_function.hpp"
#include "gwldp/tree.hpp"
#include "gwldp/types.hpp"

namespace gwldp {

// Exponentially tilted model: each offspring row reweighted by exp(g) and
// renormalized per type. The base model, the tilt and the per-type log
// normalizers are kept so importance weights are exact.
struct TiltedModel {
  GWModel base;
  TestFunction tilt;
  std::vector<double> log_normalizer;            // u(a) = log sum exp(g + log kernel) per type
  std::vector<std::vector<KernelEntry>> kernel;  // tilted rows, aligned with base rows
  std::vector<double> root_law;                  // base root law unless overridden

  const std::vector<KernelEntry>& offspring_row(TypeId a) const {
    return kernel[static_cast<std::size_t>(a)];
  }
};

// Tilts every offspring row; support is preserved exactly. The overload with
// a root law override reweights the root draw as well, and sampled trees then
// carry the root correction in their weight.
TiltedModel tilt(const GWModel& model, const TestFunction& g);
TiltedModel tilt(const GWModel& model, const TestFunction& g, std::vector<double> root_law);

// One forward draw, breadth-first. Returns nothing when the population
// exceeds `cap` before the tree closes.
std::optional<TypedTree> sample_tree(const GWModel& model, RandomSource& rng, long cap);

enum class ConditionedStatus { Ok, Exhausted, ImpossibleSize };

struct ConditionedSample {
  ConditionedStatus status = ConditionedStatus::Ok;
  std::optional<TypedTree> tree;
  long attempts = 0;
  double acceptance_probability = 0.0;  // exact mass of {|V| = n} under the model
};

// Rejection sampling of the model conditioned on exactly n vertices.
// Impossibility is decided by the exact counting program, never by float
// comparison. max_attempts == 0 picks a budget of about 100 expected
// acceptances.
ConditionedSample sample_conditioned(const GWModel& model, int n, RandomSource& rng,
                                     long max_attempts = 0);

struct WeightedTree {
  TypedTree tree;
  double log_weight = 0.0;       // sum over vertices of u(type) - g(type, config)
  double root_log_weight = 0.0;  // log base root law / tilted root law; zero without override
  double total_log_weight() const { return log_weight + root_log_weight; }
};

// One draw from the tilted model with its exact importance weight, so that
// base log-density = tilted log-density + total log weight, vertex by vertex.
std::optional<WeightedTree> sample_tilted(const TiltedModel& tilted, RandomSource& rng, long cap);

struct ImportanceEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  long draws = 0;
  long overflows = 0;
};

// Monte Carlo mean of weight * indicator(event) under the tilted model: an
// unbiased estimate of the base probability of the event restricted to trees
// within cap. Overflowed draws contribute zero.
ImportanceEstimate importance_estimate(const TiltedModel& tilted,
                                       const std::function<bool(const TypedTree&)>& event,
                                       long draws, RandomSource& rng, long cap = 1000000);

}  // namespace gwldp
