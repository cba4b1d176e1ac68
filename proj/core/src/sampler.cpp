#include "gwldp/sampler.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <string>

#include "gwldp/enumerate.hpp"
#include "gwldp/errors.hpp"
#include "gwldp/math_util.hpp"

namespace gwldp {

namespace {

// Cumulative row sums in canonical support order, one vector per type.
std::vector<std::vector<double>> row_cdfs(const std::vector<std::vector<KernelEntry>>& rows) {
  std::vector<std::vector<double>> cdfs(rows.size());
  for (std::size_t a = 0; a < rows.size(); ++a) {
    double acc = 0.0;
    cdfs[a].reserve(rows[a].size());
    for (const auto& e : rows[a]) {
      acc += e.probability;
      cdfs[a].push_back(acc);
    }
  }
  return cdfs;
}

std::vector<std::vector<KernelEntry>> model_rows(const GWModel& model) {
  std::vector<std::vector<KernelEntry>> rows(static_cast<std::size_t>(model.type_count()));
  for (TypeId a = 0; a < model.type_count(); ++a) rows[static_cast<std::size_t>(a)] = model.offspring_row(a);
  return rows;
}

std::vector<double> law_cdf(const std::vector<double>& law) {
  std::vector<double> cdf;
  cdf.reserve(law.size());
  double acc = 0.0;
  for (double p : law) {
    acc += p;
    cdf.push_back(acc);
  }
  return cdf;
}

// Breadth-first growth from a drawn root. Returns the tree and the kernel
// entry index drawn at each vertex, or nothing on overflow past cap.
struct GrownTree {
  TypedTree tree;
  std::vector<int> entry_index;  // per vertex, into the row of its type
};

std::optional<GrownTree> grow(const std::vector<std::vector<KernelEntry>>& rows,
                              const std::vector<std::vector<double>>& cdfs,
                              const std::vector<double>& root_cdf, RandomSource& rng, long cap) {
  TypeId root = static_cast<TypeId>(rng.next_index(root_cdf));
  GrownTree g{TypedTree(root), {}};
  std::deque<int> pending{0};
  while (!pending.empty()) {
    int v = pending.front();
    pending.pop_front();
    TypeId a = g.tree.vertex(v).type;
    int choice = static_cast<int>(rng.next_index(cdfs[static_cast<std::size_t>(a)]));
    if (static_cast<std::size_t>(v) >= g.entry_index.size()) g.entry_index.resize(static_cast<std::size_t>(v) + 1, -1);
    g.entry_index[static_cast<std::size_t>(v)] = choice;
    const auto& config = rows[static_cast<std::size_t>(a)][static_cast<std::size_t>(choice)].config;
    for (TypeId t : config.children) {
      if (g.tree.vertex_count() + 1 > cap) return std::nullopt;
      pending.push_back(g.tree.add_child(v, t));
    }
  }
  return g;
}

}  // namespace

std::optional<TypedTree> sample_tree(const GWModel& model, RandomSource& rng, long cap) {
  auto rows = model_rows(model);
  auto cdfs = row_cdfs(rows);
  auto root_cdf = law_cdf(model.root_law());
  auto grown = grow(rows, cdfs, root_cdf, rng, cap);
  if (!grown) return std::nullopt;
  return std::move(grown->tree);
}

ConditionedSample sample_conditioned(const GWModel& model, int n, RandomSource& rng,
                                     long max_attempts) {
  if (n < 1) throw ValidationError("impossible_size", "tree sizes start at one vertex");
  ConditionedSample out;
  if (count_census(model, n) == 0) {
    out.status = ConditionedStatus::ImpossibleSize;
    return out;
  }
  out.acceptance_probability = exact_size_distribution(model, n).q(n);
  if (max_attempts <= 0) {
    double budget = out.acceptance_probability > 0.0
                        ? std::ceil(100.0 / out.acceptance_probability)
                        : 0.0;
    max_attempts = budget > 0.0 && budget < 9e18 ? static_cast<long>(budget)
                                                 : std::numeric_limits<long>::max();
  }

  auto rows = model_rows(model);
  auto cdfs = row_cdfs(rows);
  auto root_cdf = law_cdf(model.root_law());
  while (out.attempts < max_attempts) {
    ++out.attempts;
    auto grown = grow(rows, cdfs, root_cdf, rng, n);
    if (grown && grown->tree.vertex_count() == n) {
      out.tree = std::move(grown->tree);
      return out;
    }
  }
  out.status = ConditionedStatus::Exhausted;
  return out;
}

namespace {

TiltedModel tilt_impl(const GWModel& model, const TestFunction& g,
                      std::vector<double> root_law) {
  TiltedModel t;
  t.base = model;
  t.tilt = g;
  const int k = model.type_count();
  t.log_normalizer.resize(static_cast<std::size_t>(k));
  t.kernel.resize(static_cast<std::size_t>(k));
  for (TypeId a = 0; a < k; ++a) {
    const auto& row = model.offspring_row(a);
    std::vector<double> shifted;
    shifted.reserve(row.size());
    for (const auto& e : row) {
      shifted.push_back(std::log(e.probability) + g.at(a, e.config));
    }
    double u = log_sum_exp(shifted);
    t.log_normalizer[static_cast<std::size_t>(a)] = u;
    auto& out = t.kernel[static_cast<std::size_t>(a)];
    out.reserve(row.size());
    for (std::size_t i = 0; i < row.size(); ++i) {
      out.push_back(KernelEntry{row[i].config, std::exp(shifted[i] - u)});
    }
  }
  t.root_law = std::move(root_law);
  return t;
}

}  // namespace

TiltedModel tilt(const GWModel& model, const TestFunction& g) {
  return tilt_impl(model, g, model.root_law());
}

TiltedModel tilt(const GWModel& model, const TestFunction& g, std::vector<double> root_law) {
  if (root_law.size() != static_cast<std::size_t>(model.type_count())) {
    throw ValidationError("bad_root_law", "root law override must cover every type");
  }
  double total = 0.0;
  for (std::size_t a = 0; a < root_law.size(); ++a) {
    if (!std::isfinite(root_law[a]) || root_law[a] < 0.0) {
      throw ValidationError("bad_root_law", "root law entries must be finite and nonnegative");
    }
    // Equal supports: a base-positive type with zero override mass is never
    // drawn and silently biases importance estimates; the converse draws
    // roots the base law rules out.
    if (root_law[a] > 0.0 && !(model.root_law()[a] > 0.0)) {
      throw ValidationError("bad_root_law",
                            "root law override puts mass on a type the base root law excludes");
    }
    if (model.root_law()[a] > 0.0 && !(root_law[a] > 0.0)) {
      throw ValidationError("bad_root_law",
                            "root law override drops a type the base root law charges");
    }
    total += root_law[a];
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw ValidationError("bad_root_law", "root law override must sum to one");
  }
  return tilt_impl(model, g, std::move(root_law));
}

namespace {

std::optional<WeightedTree> sample_tilted_impl(const TiltedModel& tilted,
                                               const std::vector<std::vector<double>>& cdfs,
                                               const std::vector<double>& root_cdf,
                                               RandomSource& rng, long cap) {
  auto grown = grow(tilted.kernel, cdfs, root_cdf, rng, cap);
  if (!grown) return std::nullopt;
  WeightedTree w{std::move(grown->tree), 0.0, 0.0};
  KahanSum lw;
  for (int v = 0; v < w.tree.vertex_count(); ++v) {
    TypeId a = w.tree.vertex(v).type;
    const auto& entry =
        tilted.kernel[static_cast<std::size_t>(a)][static_cast<std::size_t>(grown->entry_index[static_cast<std::size_t>(v)])];
    lw.add(tilted.log_normalizer[static_cast<std::size_t>(a)] - tilted.tilt.at(a, entry.config));
  }
  w.log_weight = lw.value();
  TypeId root = w.tree.root_type();
  double base_root = tilted.base.root_probability(root);
  double used_root = tilted.root_law[static_cast<std::size_t>(root)];
  w.root_log_weight = (base_root == used_root) ? 0.0 : std::log(base_root) - std::log(used_root);
  return w;
}

}  // namespace

std::optional<WeightedTree> sample_tilted(const TiltedModel& tilted, RandomSource& rng, long cap) {
  auto cdfs = row_cdfs(tilted.kernel);
  auto root_cdf = law_cdf(tilted.root_law);
  return sample_tilted_impl(tilted, cdfs, root_cdf, rng, cap);
}

ImportanceEstimate importance_estimate(const TiltedModel& tilted,
                                       const std::function<bool(const TypedTree&)>& event,
                                       long draws, RandomSource& rng, long cap) {
  if (draws < 1) throw ValidationError("bad_draws", "importance estimation needs at least one draw");
  auto cdfs = row_cdfs(tilted.kernel);
  auto root_cdf = law_cdf(tilted.root_law);
  KahanSum sum;
  KahanSum sum_sq;
  ImportanceEstimate out;
  out.draws = draws;
  for (long i = 0; i < draws; ++i) {
    auto w = sample_tilted_impl(tilted, cdfs, root_cdf, rng, cap);
    double value = 0.0;
    if (!w) {
      ++out.overflows;
    } else if (event(w->tree)) {
      value = std::exp(w->total_log_weight());
    }
    sum.add(value);
    sum_sq.add(value * value);
  }
  double mean = sum.value() / static_cast<double>(draws);
  out.estimate = mean;
  if (draws > 1) {
    double var = (sum_sq.value() - static_cast<double>(draws) * mean * mean) /
                 static_cast<double>(draws - 1);
    out.std_error = std::sqrt(std::max(var, 0.0) / static_cast<double>(draws));
  }
  return out;
}

}  // namespace gwldp
