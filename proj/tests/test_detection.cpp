#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "gaussclone/cloner.hpp"
#include "gaussclone/detection.hpp"
#include "gaussclone/gaussian_state.hpp"
#include "gaussclone/quadrature.hpp"
#include "gaussclone/random.hpp"
#include "support.hpp"

using namespace gaussclone;

namespace {

double homodyne_sigma(double epsilon) {
  return std::sqrt(0.5 + (1.0 - epsilon) / (4.0 * epsilon));
}

ClonerConfig comm_config(double gain, double eta) {
  return ClonerConfig(0.5, 0.5, gain, GaussianMeasurement::heterodyne(eta), vacuum());
}

void check_estimate_invariant(const CommEstimate& est) {
  CHECK(est.value >= 0.0);
  CHECK(est.value <= 0.5 + est.abs_error);
  CHECK(est.abs_error >= 0.0);
}

}  // namespace

TEST_CASE("homodyne x marginal") {
  SUBCASE("vacuum") {
    const XMarginal ideal = homodyne_x_marginal(vacuum(), 1.0);
    CHECK(ideal.mean == 0.0);
    CHECK(ideal.variance == doctest::Approx(0.5).epsilon(1e-15));

    const XMarginal lossy = homodyne_x_marginal(vacuum(), 0.5);
    CHECK(lossy.mean == 0.0);
    CHECK(lossy.variance == doctest::Approx(0.75).epsilon(1e-15));
  }

  SUBCASE("coherent mean passes through unchanged") {
    const std::complex<double> alpha(0.8, -0.3);
    const XMarginal m = homodyne_x_marginal(coherent(alpha), 0.7);
    CHECK(m.mean == doctest::Approx(std::numbers::sqrt2 * alpha.real()).epsilon(1e-14));
    CHECK(m.variance ==
          doctest::Approx(0.5 + 0.3 / (4.0 * 0.7)).epsilon(1e-14));
  }

  SUBCASE("squeezed variance") {
    const double r = 0.6;
    const XMarginal m = homodyne_x_marginal(squeezed_coherent(0.0, -r), 0.8);
    CHECK(m.variance ==
          doctest::Approx(0.5 * std::exp(-2.0 * r) + 0.2 / 3.2).epsilon(1e-13));
  }

  SUBCASE("validation") {
    CHECK_THROWS_AS(homodyne_x_marginal(vacuum(), 0.0), RangeError);
    CHECK_THROWS_AS(homodyne_x_marginal(vacuum(), -0.2), RangeError);
    CHECK_THROWS_AS(homodyne_x_marginal(vacuum(), 1.2), RangeError);
    CHECK_THROWS_AS(homodyne_x_marginal(tensor(vacuum(), vacuum()), 1.0),
                    DimensionError);
  }
}

TEST_CASE("error probability at a fixed outcome") {
  SUBCASE("identical hypotheses are indistinguishable") {
    const GaussianState clone = squeezed_coherent({0.4, -0.2}, 0.3);
    for (double threshold : {-0.7, 0.0, 1.3}) {
      const double p =
          error_prob_given_z(clone, clone, HomodyneDetector{0.9, threshold});
      CHECK(p == doctest::Approx(0.5).epsilon(1e-15));
    }
  }

  SUBCASE("symmetric means give the textbook expression") {
    const double m = 0.85;
    const std::complex<double> amp(m / std::numbers::sqrt2, 0.0);
    const GaussianState plus = coherent(amp);
    const GaussianState minus = coherent(-amp);
    for (double epsilon : {1.0, 0.8, 0.5}) {
      const double p = error_prob_given_z(plus, minus, HomodyneDetector{epsilon, 0.0});
      CHECK(p == doctest::Approx(testsupport::normal_cdf(-m / homodyne_sigma(epsilon)))
                     .epsilon(1e-13));
    }
  }

  SUBCASE("mirror clones from the single-shot pipeline") {
    const std::complex<double> z(0.7, -0.4);
    const GaussianState rho = coherent(0.6);
    const GaussianState plus =
        run_single_shot(rho, rho, comm_config(1.0, 1.0), z).clones.clone1;
    const GaussianState minus =
        run_single_shot(rho, rho, comm_config(-1.0, 1.0), z).clones.clone1;
    for (double epsilon : {1.0, 0.75}) {
      const double p = error_prob_given_z(plus, minus, HomodyneDetector{epsilon, 0.0});
      CHECK(p ==
            doctest::Approx(testsupport::normal_cdf(-z.real() / homodyne_sigma(epsilon)))
                .epsilon(1e-12));
    }
  }

  SUBCASE("validation") {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(error_prob_given_z(vacuum(), vacuum(), HomodyneDetector{0.9, nan}),
                    RangeError);
    CHECK_THROWS_AS(error_prob_given_z(vacuum(), vacuum(), HomodyneDetector{0.0, 0.0}),
                    RangeError);
    CHECK_THROWS_AS(
        error_prob_given_z(tensor(vacuum(), vacuum()), vacuum(), HomodyneDetector{1.0, 0.0}),
        DimensionError);
  }
}

TEST_CASE("input validation and budget floors") {
  const auto quad = EstimateMethod::quadrature;
  const auto mc = EstimateMethod::monte_carlo;

  SUBCASE("parameter ranges") {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(average_error_probability(-0.1, 1.0, 1.0, quad), RangeError);
    CHECK_THROWS_AS(average_error_probability(nan, 1.0, 1.0, quad), RangeError);
    CHECK_THROWS_AS(average_error_probability(1.0, 0.0, 1.0, quad), RangeError);
    CHECK_THROWS_AS(average_error_probability(1.0, 1.5, 1.0, quad), RangeError);
    CHECK_THROWS_AS(average_error_probability(1.0, 1.0, 0.0, mc), RangeError);
    CHECK_THROWS_AS(average_error_probability(1.0, 1.0, -0.4, mc), RangeError);
  }

  SUBCASE("budget floors") {
    CHECK_THROWS_AS(average_error_probability(1.0, 1.0, 1.0, quad, 1599), BudgetError);
    CHECK_THROWS_AS(average_error_probability(1.0, 1.0, 1.0, quad, 1), BudgetError);
    CHECK_THROWS_AS(average_error_probability(1.0, 1.0, 1.0, mc, 99), BudgetError);
    // The floor is checked before any shortcut takes effect.
    CHECK_THROWS_AS(average_error_probability(0.0, 1.0, 1.0, quad, 10), BudgetError);
    CHECK_THROWS_AS(average_error_probability(0.0, 1.0, 1.0, mc, 10), BudgetError);
    CHECK_NOTHROW(average_error_probability(0.3, 1.0, 1.0, mc, 100));
  }

  SUBCASE("budget sets the quadrature order") {
    const CommEstimate floor = average_error_probability(0.8, 1.0, 1.0, quad, 1600);
    CHECK(floor.n_evals == 40 * 40 + 32 * 32);
    const CommEstimate larger = average_error_probability(0.8, 1.0, 1.0, quad, 2500);
    CHECK(larger.n_evals == 50 * 50 + 42 * 42);
    CHECK(std::abs(floor.value - larger.value) < 1e-9);
  }

  SUBCASE("monte carlo consumes the whole budget") {
    const CommEstimate est = average_error_probability(0.8, 1.0, 1.0, mc, 500);
    CHECK(est.n_evals == 500);
    CHECK(est.abs_error > 0.0);
    check_estimate_invariant(est);
  }
}

TEST_CASE("zero signal gives even odds") {
  for (auto method : {EstimateMethod::quadrature, EstimateMethod::monte_carlo}) {
    for (double eta : {1.0, 0.6}) {
      for (double epsilon : {1.0, 0.45}) {
        const CommEstimate est = average_error_probability(0.0, eta, epsilon, method);
        CHECK(est.value == 0.5);
        CHECK(est.abs_error == 0.0);
        CHECK(est.n_evals == 0);
        CHECK(est.method == method);
      }
    }
  }
}

TEST_CASE("quadrature matches the coherent closed form") {
  const auto quad = EstimateMethod::quadrature;

  SUBCASE("ideal detectors reduce to the complementary error function") {
    for (double alpha : {0.5, 1.0, 2.0}) {
      CAPTURE(alpha);
      const CommEstimate est = average_error_probability(alpha, 1.0, 1.0, quad);
      CHECK(std::abs(est.value - 0.5 * std::erfc(alpha)) < 1e-8);
      CHECK(est.abs_error < 1e-7);
      CHECK(est.value < 0.5);
      check_estimate_invariant(est);
    }
  }

  SUBCASE("general efficiencies") {
    for (double eta : {1.0, 0.75, 0.5}) {
      for (double epsilon : {1.0, 0.6}) {
        CAPTURE(eta);
        CAPTURE(epsilon);
        const CommEstimate est = average_error_probability(0.8, eta, epsilon, quad);
        CHECK(std::abs(est.value - testsupport::comm_closed_form(0.8, eta, epsilon)) <
              1e-7);
        check_estimate_invariant(est);
      }
    }
  }

  SUBCASE("better detectors never hurt") {
    const double lossy_eta =
        average_error_probability(0.8, 0.5, 0.7, quad).value;
    const double clean_eta =
        average_error_probability(0.8, 1.0, 0.7, quad).value;
    CHECK(clean_eta < lossy_eta - 1e-6);

    const double lossy_eps =
        average_error_probability(0.8, 0.75, 0.5, quad).value;
    const double clean_eps =
        average_error_probability(0.8, 0.75, 1.0, quad).value;
    CHECK(clean_eps < lossy_eps - 1e-6);
  }
}

TEST_CASE("monte carlo agrees and is reproducible") {
  const auto mc = EstimateMethod::monte_carlo;

  SUBCASE("matches the closed form within sampling error") {
    const CommEstimate est =
        average_error_probability(0.7, 0.75, 0.8, mc, 50000);
    const double target = testsupport::comm_closed_form(0.7, 0.75, 0.8);
    CHECK(std::abs(est.value - target) < 5.0 * est.abs_error);
    CHECK(est.abs_error < 5e-3);
    check_estimate_invariant(est);
  }

  SUBCASE("same seed, same estimate") {
    const CommEstimate a = average_error_probability(0.9, 0.8, 0.9, mc, 20000, 1234);
    const CommEstimate b = average_error_probability(0.9, 0.8, 0.9, mc, 20000, 1234);
    CHECK(a.value == b.value);
    CHECK(a.abs_error == b.abs_error);
    const CommEstimate c = average_error_probability(0.9, 0.8, 0.9, mc, 20000, 4321);
    CHECK(c.value != a.value);
  }
}

TEST_CASE("error curve") {
  const auto quad = EstimateMethod::quadrature;
  const auto mc = EstimateMethod::monte_carlo;

  SUBCASE("grid validation") {
    const std::vector<double> stalled{0.5, 0.5};
    const std::vector<double> decreasing{1.0, 0.5};
    CHECK_THROWS_AS(error_curve({}, 1.0, 1.0, quad), RangeError);
    CHECK_THROWS_AS(error_curve(stalled, 1.0, 1.0, quad), RangeError);
    CHECK_THROWS_AS(error_curve(decreasing, 1.0, 1.0, quad), RangeError);
  }

  SUBCASE("ideal curve and monotonicity") {
    const std::vector<double> alphas{0.0, 0.5, 1.0, 1.5, 2.0};
    const auto points = error_curve(alphas, 1.0, 1.0, quad);
    REQUIRE(points.size() == alphas.size());
    CHECK(points[0].h_e == 0.5);
    for (std::size_t i = 0; i < points.size(); ++i) {
      CAPTURE(i);
      CHECK(points[i].alpha == alphas[i]);
      CHECK(std::abs(points[i].h_e - 0.5 * std::erfc(alphas[i])) < 1e-8);
      CHECK(points[i].h_e >= 0.0);
      CHECK(points[i].h_e <= 0.5 + points[i].abs_error);
      if (i > 0) {
        CHECK(points[i].h_e <= points[i - 1].h_e + 1e-10);
        CHECK(points[i].h_e <=
              points[i - 1].h_e + 3.0 * (points[i].abs_error + points[i - 1].abs_error));
      }
    }
  }

  SUBCASE("ideal homodyne detector gives the lowest curve") {
    const std::vector<double> alphas{0.5, 1.0};
    const auto best = error_curve(alphas, 0.75, 1.0, quad);
    const auto worse = error_curve(alphas, 0.75, 0.7, quad);
    for (std::size_t i = 0; i < alphas.size(); ++i)
      CHECK(best[i].h_e < worse[i].h_e - 1e-8);
  }

  SUBCASE("results do not depend on the thread count") {
    const std::vector<double> alphas{0.3, 0.9};
    const auto one = error_curve(alphas, 0.8, 0.9, mc, 4000, 777, 1);
    const auto three = error_curve(alphas, 0.8, 0.9, mc, 4000, 777, 3);
    REQUIRE(one.size() == three.size());
    for (std::size_t i = 0; i < one.size(); ++i) {
      CHECK(one[i].h_e == three[i].h_e);
      CHECK(one[i].abs_error == three[i].abs_error);
    }
  }

  SUBCASE("each point uses a seed derived from its index") {
    const std::vector<double> alphas{0.4, 1.1};
    const auto points = error_curve(alphas, 0.9, 0.85, mc, 3000, 2024);
    for (std::size_t i = 0; i < alphas.size(); ++i) {
      const CommEstimate direct = average_error_probability(
          alphas[i], 0.9, 0.85, mc, 3000, RandomStream::derive_seed(2024, i));
      CHECK(points[i].h_e == direct.value);
      CHECK(points[i].abs_error == direct.abs_error);
    }
  }
}

TEST_CASE("threshold at the symmetry point is optimal") {
  const double alpha = 0.8, eta = 0.9, epsilon = 0.85;
  const GaussianState rho = coherent(alpha);
  const GaussianState mixed =
      apply_symplectic(tensor(rho, rho), bs_symplectic(0.5, 2, {0, 1}));
  const ClonerConfig plus = comm_config(1.0, eta);
  const ClonerConfig minus = comm_config(-1.0, eta);

  // Outcome distribution of the heterodyne result on mode 1, in z coordinates.
  const Eigen::Vector2d mean_z = mixed.mean().segment<2>(2) / std::numbers::sqrt2;
  const Eigen::Matrix2d sigma_z =
      0.5 * (mixed.cov().block<2, 2>(2, 2) + plus.meas.cov());
  const double l11 = std::sqrt(sigma_z(0, 0));
  const double l22 = std::sqrt(sigma_z(1, 1));
  REQUIRE(std::abs(sigma_z(0, 1)) < 1e-14);

  const int order = 24;
  const GaussHermiteRule rule = gauss_hermite(order);
  const std::vector<double> thresholds{-0.1, 0.0, 0.1};
  std::vector<double> averaged(thresholds.size(), 0.0);
  for (int i = 0; i < order; ++i) {
    for (int j = 0; j < order; ++j) {
      const std::complex<double> z(
          mean_z[0] + std::numbers::sqrt2 * l11 * rule.nodes[i],
          mean_z[1] + std::numbers::sqrt2 * l22 * rule.nodes[j]);
      const GaussianState clone_plus = run_single_shot(rho, rho, plus, z).clones.clone1;
      const GaussianState clone_minus =
          run_single_shot(rho, rho, minus, z).clones.clone1;
      const double w = rule.weights[i] * rule.weights[j] / std::numbers::pi;
      for (std::size_t t = 0; t < thresholds.size(); ++t)
        averaged[t] += w * error_prob_given_z(clone_plus, clone_minus,
                                              HomodyneDetector{epsilon, thresholds[t]});
    }
  }

  CHECK(averaged[1] ==
        doctest::Approx(testsupport::comm_closed_form(alpha, eta, epsilon))
            .epsilon(1e-8));
  CHECK(averaged[0] > averaged[1] + 1e-4);
  CHECK(averaged[2] > averaged[1] + 1e-4);

  const CommEstimate reference =
      average_error_probability(alpha, eta, epsilon, EstimateMethod::quadrature);
  CHECK(std::abs(averaged[1] - reference.value) < 1e-9);
}
