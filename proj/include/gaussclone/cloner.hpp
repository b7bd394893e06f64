#pragma once

#include <complex>

#include "gaussclone/gaussian_state.hpp"

namespace gaussclone {

// Transmissivities are kept away from the endpoints: at tau in {0, 1} the
// feed-forward gains below diverge.
inline constexpr double kMinTransmissivity = 1e-6;

// Configuration of the selective cloning machine: mix inputs 1 and 2 at a
// beam splitter of transmissivity tau1, measure the reflected mode with a
// noisy Gaussian measurement, feed the outcome forward with gain g onto the
// transmitted mode, then split against the ancilla rho3 at tau2.
struct ClonerConfig {
  double tau1;
  double tau2;
  double gain;
  GaussianMeasurement meas;
  GaussianState ancilla;

  ClonerConfig(double tau1, double tau2, double gain, GaussianMeasurement meas,
               GaussianState ancilla);

  // Effective input weights of the averaged output of the first stage:
  // cov = f1^2 sigma1 + f2^2 sigma2 + g^2 sigma_M, mean = f1 X1 + f2 X2.
  double f1() const;  // sqrt(tau1) + g sqrt(1 - tau1)
  double f2() const;  // g sqrt(tau1) - sqrt(1 - tau1)
};

struct CloneResult {
  GaussianState clone1;
  GaussianState clone2;
  double f1;
  double f2;
};

// Outcome-averaged pipeline, staged through the moment calculus.
CloneResult run_averaged(const GaussianState& rho1, const GaussianState& rho2,
                         const ClonerConfig& cfg);

struct CloneMoments {
  Eigen::Vector2d mean1;
  Eigen::Vector2d mean2;
  Eigen::Matrix2d cov1;
  Eigen::Matrix2d cov2;
};

// Closed-form clone moments for single-mode inputs; must agree with
// run_averaged to numerical precision.
CloneMoments clone_moments_closed_form(const Eigen::Matrix2d& sigma1,
                                       const Eigen::Matrix2d& sigma2,
                                       const Eigen::Matrix2d& sigma3,
                                       const Eigen::Vector2d& x1, const Eigen::Vector2d& x2,
                                       const Eigen::Vector2d& x3, const ClonerConfig& cfg);

struct SingleShot {
  CloneResult clones;  // conditioned on the measurement outcome
  double density;      // p(z) of that outcome
};

// One run at a fixed measurement outcome z (conditional clones).
SingleShot run_single_shot(const GaussianState& rho1, const GaussianState& rho2,
                           const ClonerConfig& cfg, std::complex<double> z);

enum class CloneTarget { input1, input2 };

// Gain that makes the machine selective: g1 = sqrt((1-tau1)/tau1) wipes
// input 2 from the clones, g2 = -sqrt(tau1/(1-tau1)) wipes input 1.
double gain_select(CloneTarget target, double tau1);

// Mean-sign flip (the input-2-selective clones come out with mean -X2).
GaussianState phase_flip(const GaussianState& state);

}  // namespace gaussclone
