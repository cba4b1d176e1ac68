// Mean matrices, the Perron eigenpair against a characteristic-polynomial
// oracle, criticality classification, and the spectral potential.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "gwldp/errors.hpp"
#include "gwldp/rng.hpp"
#include "gwldp/spectral.hpp"
#include "support/test_models.hpp"

using namespace gwldp;
using gwldp::testing::binary_model;
using gwldp::testing::subcritical_model;
using gwldp::testing::supercritical_model;
using gwldp::testing::ternary_model;
using gwldp::testing::three_cycle_model;
using gwldp::testing::two_type_model;

namespace {

// Independent oracle for the spectral radius of a 1x1..3x3 nonnegative
// matrix: Newton's method on the characteristic polynomial, started from the
// max row sum, which bounds the radius from above. Beyond the largest real
// root the polynomial is positive, increasing and convex, so the iteration
// descends monotonically onto it.
double char_poly_radius(const MeanMatrix& m) {
  const int k = m.dim;
  double upper = 0.0;
  for (TypeId a = 0; a < k; ++a) {
    double row = 0.0;
    for (TypeId b = 0; b < k; ++b) row += m.at(a, b);
    upper = std::max(upper, row);
  }
  if (k == 1) return m.at(0, 0);
  double c2 = 0.0;  // trace
  for (TypeId a = 0; a < k; ++a) c2 += m.at(a, a);
  if (k == 2) {
    double det = m.at(0, 0) * m.at(1, 1) - m.at(0, 1) * m.at(1, 0);
    return 0.5 * (c2 + std::sqrt(std::max(c2 * c2 - 4.0 * det, 0.0)));
  }
  // k == 3: p(x) = x^3 - c2 x^2 + c1 x - c0.
  double c1 = 0.0;
  for (int i = 0; i < 3; ++i) {
    int j = (i + 1) % 3;
    c1 += m.at(i, i) * m.at(j, j) - m.at(i, j) * m.at(j, i);
  }
  double c0 = m.at(0, 0) * (m.at(1, 1) * m.at(2, 2) - m.at(1, 2) * m.at(2, 1)) -
              m.at(0, 1) * (m.at(1, 0) * m.at(2, 2) - m.at(1, 2) * m.at(2, 0)) +
              m.at(0, 2) * (m.at(1, 0) * m.at(2, 1) - m.at(1, 1) * m.at(2, 0));
  double x = upper + 1.0;
  for (int it = 0; it < 200; ++it) {
    double p = ((x - c2) * x + c1) * x - c0;
    double dp = (3.0 * x - 2.0 * c2) * x + c1;
    double next = x - p / dp;
    if (std::abs(next - x) <= 1e-14 * std::max(1.0, std::abs(x))) return next;
    x = next;
  }
  return x;
}

}  // namespace

TEST_CASE("mean matrices of the bundled models") {
  MeanMatrix binary = mean_matrix(binary_model());
  REQUIRE(binary.dim == 1);
  CHECK(binary.at(0, 0) == doctest::Approx(1.0));

  MeanMatrix two = mean_matrix(two_type_model());
  REQUIRE(two.dim == 2);
  CHECK(two.at(0, 0) == 0.0);
  CHECK(two.at(0, 1) == doctest::Approx(2.0));
  CHECK(two.at(1, 0) == doctest::Approx(0.5));
  CHECK(two.at(1, 1) == 0.0);

  CHECK(mean_matrix(supercritical_model()).at(0, 0) == doctest::Approx(1.5));
  CHECK(mean_matrix(subcritical_model()).at(0, 0) == doctest::Approx(0.5));
}

TEST_CASE("irreducibility is decided on the zero pattern") {
  MeanMatrix upper{2, {1.0, 1.0, 0.0, 1.0}};
  CHECK_FALSE(irreducible(upper));

  MeanMatrix cycle{2, {0.0, 1.0, 1.0, 0.0}};
  CHECK(irreducible(cycle));

  CHECK(irreducible(mean_matrix(two_type_model())));
  CHECK(irreducible(mean_matrix(binary_model())));
}

TEST_CASE("eigenpair of the periodic two cycle") {
  MeanMatrix cycle{2, {0.0, 1.0, 1.0, 0.0}};
  Eigenpair pair = perron_eigenpair(cycle);
  CHECK(pair.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(pair.vector[0] == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(pair.vector[1] == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(pair.residual <= 1e-12);
}

TEST_CASE("defective pattern fails to converge with the documented code") {
  MeanMatrix nilpotent{2, {0.0, 1.0, 0.0, 0.0}};
  std::string code;
  try {
    perron_eigenpair(nilpotent, 1e-12, 2000);
  } catch (const ComputeError& e) {
    code = e.code();
  }
  CHECK(code == "convergence_failure");
}

TEST_CASE("power iteration matches the characteristic polynomial oracle") {
  RandomSource rng(20260822);
  for (int trial = 0; trial < 50; ++trial) {
    int k = 2 + static_cast<int>(rng.next_uniform() * 2.0);
    MeanMatrix m{k, std::vector<double>(static_cast<std::size_t>(k * k), 0.0)};
    for (auto& v : m.entries) v = 0.1 + 1.9 * rng.next_uniform();
    Eigenpair pair = perron_eigenpair(m);
    CHECK(pair.value == doctest::Approx(char_poly_radius(m)).epsilon(1e-8));
    double mass = 0.0;
    for (double v : pair.vector) {
      CHECK(v >= 0.0);
      mass += v;
    }
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("classification uses the band around one") {
  CHECK(classify(0.5) == Criticality::Subcritical);
  CHECK(classify(1.5) == Criticality::Supercritical);
  CHECK(classify(1.0) == Criticality::Critical);
  CHECK(classify(1.0000000005, 1e-9) == Criticality::Critical);
  CHECK(classify(1.000000002, 1e-9) == Criticality::Supercritical);
  CHECK(classify(0.999999998, 1e-9) == Criticality::Subcritical);
  CHECK(to_string(Criticality::Critical) == "Critical");
}

TEST_CASE("analyze reports the frozen eigenpairs") {
  SpectralReport binary = analyze(binary_model());
  CHECK(std::abs(binary.eigenvalue - 1.0) <= 1e-10);
  REQUIRE(binary.eigenvector.size() == 1);
  CHECK(binary.eigenvector[0] == doctest::Approx(1.0));
  CHECK(binary.criticality == Criticality::Critical);
  CHECK(binary.irreducible);

  SpectralReport two = analyze(two_type_model());
  CHECK(std::abs(two.eigenvalue - 1.0) <= 1e-8);
  CHECK(two.eigenvector[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-8));
  CHECK(two.eigenvector[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-8));
  CHECK(two.criticality == Criticality::Critical);

  CHECK(analyze(supercritical_model()).criticality == Criticality::Supercritical);
  CHECK(analyze(subcritical_model()).criticality == Criticality::Subcritical);
  CHECK(analyze(ternary_model()).criticality == Criticality::Critical);

  SpectralReport cycle = analyze(three_cycle_model(0.9, 0.8, 0.7));
  CHECK(cycle.irreducible);
  CHECK(cycle.eigenvalue == doctest::Approx(std::cbrt(0.9 * 0.8 * 0.7)).epsilon(1e-10));
}

TEST_CASE("spectral potential: anchors, homogeneity, monotonicity, convexity") {
  GWModel m = binary_model();
  std::vector<double> pi{1.0};

  TestFunction zero;
  CHECK(spectral_potential(zero, pi, m) == doctest::Approx(0.0).epsilon(1e-15));

  TestFunction leaf_log2;
  leaf_log2.set(0, OffspringConfig{}, std::log(2.0));
  CHECK(spectral_potential(leaf_log2, pi, m) == doctest::Approx(std::log(1.5)));

  RandomSource rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    TestFunction g;
    TestFunction h;
    TestFunction g_plus_t;
    TestFunction mid;
    TestFunction dominating;
    double t = -10.0 + 20.0 * rng.next_uniform();
    for (const auto& e : m.offspring_row(0)) {
      double gv = -3.0 + 6.0 * rng.next_uniform();
      double hv = -3.0 + 6.0 * rng.next_uniform();
      g.set(0, e.config, gv);
      h.set(0, e.config, hv);
      g_plus_t.set(0, e.config, gv + t);
      mid.set(0, e.config, 0.5 * (gv + hv));
      dominating.set(0, e.config, std::max(gv, hv));
    }
    double ug = spectral_potential(g, pi, m);
    double uh = spectral_potential(h, pi, m);
    CHECK(spectral_potential(g_plus_t, pi, m) == doctest::Approx(ug + t).epsilon(1e-12));
    CHECK(spectral_potential(mid, pi, m) <= 0.5 * (ug + uh) + 1e-12);
    CHECK(spectral_potential(dominating, pi, m) >= std::max(ug, uh) - 1e-12);
  }
}

TEST_CASE("potential gradient matches finite differences and has mass one") {
  GWModel m = two_type_model();
  SpectralReport spectral = analyze(m);
  RandomSource rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    TestFunction g;
    for (TypeId a = 0; a < m.type_count(); ++a) {
      for (const auto& e : m.offspring_row(a)) {
        g.set(a, e.config, -2.0 + 4.0 * rng.next_uniform());
      }
    }
    OffspringMeasure grad = spectral_potential_gradient(g, spectral.eigenvector, m);
    CHECK(grad.mass() == doctest::Approx(1.0).epsilon(1e-12));

    const double step = 1e-6;
    for (TypeId a = 0; a < m.type_count(); ++a) {
      for (const auto& e : m.offspring_row(a)) {
        TestFunction up = g;
        TestFunction down = g;
        up.set(a, e.config, g.at(a, e.config) + step);
        down.set(a, e.config, g.at(a, e.config) - step);
        double fd = (spectral_potential(up, spectral.eigenvector, m) -
                     spectral_potential(down, spectral.eigenvector, m)) /
                    (2.0 * step);
        CHECK(grad.at(a, e.config) ==
              doctest::Approx(fd).epsilon(1e-5));
      }
    }
  }
}
