#pragma once

// Shared helpers for the test suites: random physical inputs, reference
// formulas, and brute-force integrators used to cross-check the library.

#include <cmath>
#include <complex>
#include <functional>

#include <Eigen/Dense>

#include "gaussclone/gaussian_state.hpp"
#include "gaussclone/random.hpp"

namespace testsupport {

inline Eigen::Matrix2d rotation(double phi) {
  Eigen::Matrix2d r;
  r << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
  return r;
}

// Random physical 2x2 covariance: a squeezed thermal block rotated by a
// random angle. Symplectic eigenvalue is (2 n_th + 1)/2 >= 1/2 by design.
inline Eigen::Matrix2d random_cov(gaussclone::RandomStream& rng) {
  const double r = -0.8 + 1.6 * rng.uniform();
  const double n_th = 1.5 * rng.uniform();
  const double phi = 2.0 * M_PI * rng.uniform();
  Eigen::Matrix2d d = Eigen::Matrix2d::Zero();
  d(0, 0) = (2.0 * n_th + 1.0) * std::exp(2.0 * r) / 2.0;
  d(1, 1) = (2.0 * n_th + 1.0) * std::exp(-2.0 * r) / 2.0;
  const Eigen::Matrix2d rot = rotation(phi);
  return rot * d * rot.transpose();
}

inline Eigen::Vector2d random_mean(gaussclone::RandomStream& rng) {
  return Eigen::Vector2d(1.5 * rng.normal(), 1.5 * rng.normal());
}

inline gaussclone::GaussianState random_state(gaussclone::RandomStream& rng) {
  return gaussclone::GaussianState(random_mean(rng), random_cov(rng));
}

inline gaussclone::GaussianMeasurement random_measurement(
    gaussclone::RandomStream& rng) {
  return gaussclone::GaussianMeasurement(random_cov(rng));
}

inline double normal_cdf(double t) { return 0.5 * std::erfc(-t / std::sqrt(2.0)); }

// Closed form for the communication protocol (balanced machine, vacuum
// ancilla, threshold 0): the clone x-mean is +-Re z with homodyne variance
// 1/2 + (1-eps)/(4 eps), and Re z ~ Normal(sqrt(2) alpha, 1/(2 eta)).
inline double comm_closed_form(double alpha, double eta, double epsilon) {
  const double var =
      0.5 + (1.0 - epsilon) / (4.0 * epsilon) + 1.0 / (2.0 * eta);
  return normal_cdf(-std::sqrt(2.0) * alpha / std::sqrt(var));
}

// Trapezoid integration of f over [lo1, hi1] x [lo2, hi2]; plenty for the
// Gaussian integrands it is applied to once the box covers the tails.
inline double trapezoid_2d(const std::function<double(double, double)>& f,
                           double lo1, double hi1, double lo2, double hi2, int n) {
  const double h1 = (hi1 - lo1) / n;
  const double h2 = (hi2 - lo2) / n;
  double total = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double wi = (i == 0 || i == n) ? 0.5 : 1.0;
    for (int j = 0; j <= n; ++j) {
      const double wj = (j == 0 || j == n) ? 0.5 : 1.0;
      total += wi * wj * f(lo1 + i * h1, lo2 + j * h2);
    }
  }
  return total * h1 * h2;
}

inline double max_abs_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

inline double min_symplectic(const gaussclone::GaussianState& state) {
  return gaussclone::symplectic_eigenvalues(state.cov()).minCoeff();
}

}  // namespace testsupport
