#pragma once

#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gaussclone/errors.hpp"
#include "gaussclone/random.hpp"

namespace gaussclone {

// Moment calculus for multimode Gaussian states.
//
// Conventions (hbar = 1): quadratures x = (a + a^dag)/sqrt(2),
// y = -i (a - a^dag)/sqrt(2); vacuum covariance (1/2) I. Vectors are ordered
// (x1, y1, x2, y2, ...) so one mode occupies one contiguous 2x2 block.
// Symplectic maps act as sigma -> S^T sigma S, X -> S^T X.

using QuadVector = Eigen::VectorXd;  // length 2n
using CovMatrix = Eigen::MatrixXd;   // 2n x 2n, symmetric, physical

inline constexpr double kSymTol = 1e-10;        // symmetry / physicality slack
inline constexpr double kVacuumVariance = 0.5;  // per-quadrature vacuum noise

// Standard symplectic form Omega (block diag of [[0,1],[-1,0]]).
Eigen::MatrixXd symplectic_form(int n_modes);

// Symplectic spectrum of a covariance matrix, ascending. A state is physical
// iff every value is >= 1/2. Closed forms for n <= 2, eigensolver above.
Eigen::VectorXd symplectic_eigenvalues(const CovMatrix& cov);

class GaussianState {
 public:
  // Validates sizes, symmetry (within kSymTol, then symmetrizes exactly),
  // finiteness, and physicality of the symplectic spectrum.
  GaussianState(QuadVector mean, CovMatrix cov);

  int n_modes() const { return n_modes_; }
  const QuadVector& mean() const { return mean_; }
  const CovMatrix& cov() const { return cov_; }

  Eigen::Vector2d mode_mean(int mode) const;
  Eigen::Matrix2d mode_cov(int mode) const;

 private:
  int n_modes_;
  QuadVector mean_;
  CovMatrix cov_;
};

// Single-mode factories.
GaussianState vacuum();
GaussianState coherent(std::complex<double> alpha);
// Squeezed displaced state S(r)|alpha>: cov diag(e^{2r}, e^{-2r})/2.
GaussianState squeezed_coherent(std::complex<double> alpha, double r);
// Squeezed thermal state: zero mean, cov diag((2n+1)e^{2s}, (2n+1)e^{-2s})/2.
GaussianState squeezed_thermal(double n_th, double s);

GaussianState tensor(const GaussianState& a, const GaussianState& b);

class SymplecticOp {
 public:
  // Validates S^T Omega S = Omega within kSymTol.
  explicit SymplecticOp(Eigen::MatrixXd matrix);
  const Eigen::MatrixXd& matrix() const { return matrix_; }
  int n_modes() const { return static_cast<int>(matrix_.rows()) / 2; }

 private:
  Eigen::MatrixXd matrix_;
};

// Beam splitter of transmissivity tau between two modes of an n-mode system:
// identity elsewhere, [[sqrt(tau) I, sqrt(1-tau) I], [-sqrt(1-tau) I,
// sqrt(tau) I]] on the (modes.first, modes.second) blocks.
SymplecticOp bs_symplectic(double tau, int n_modes, std::pair<int, int> modes);

GaussianState apply_symplectic(const GaussianState& state, const SymplecticOp& op);

// Shift one mode's mean by gain * sqrt(2) * (Re z, Im z); covariance intact.
GaussianState displace(const GaussianState& state, int mode, std::complex<double> z,
                       double gain = 1.0);

// Gaussian (heterodyne-like) measurement of one mode, parameterized by the
// 2x2 noise covariance sigma_M added to the measured mode's block.
class GaussianMeasurement {
 public:
  explicit GaussianMeasurement(Eigen::Matrix2d cov);
  // Quantum efficiency eta in (0, 1]: sigma_M = (2 - eta)/(2 eta) I.
  static GaussianMeasurement heterodyne(double eta);
  const Eigen::Matrix2d& cov() const { return cov_; }

 private:
  Eigen::Matrix2d cov_;
};

// Outcome density p(z) = exp(-d^T Sigma^{-1} d / 2) / (pi sqrt(det Sigma))
// with Sigma = B + sigma_M, d = sqrt(2)(Re z, Im z) - X_mode. Normalized so
// that integral over d^2z is 1.
double outcome_density(const GaussianState& state, int mode,
                       const GaussianMeasurement& meas, std::complex<double> z);

struct Conditioned {
  GaussianState state;  // remaining modes, original relative order
  double density;       // p(z) of the observed outcome
};

// Condition the remaining modes on outcome z for the measured mode:
// cov' = A - C Sigma^{-1} C^T, mean' = X_A + C Sigma^{-1} (X_M - X_B).
Conditioned measure_mode(const GaussianState& state, int mode,
                         const GaussianMeasurement& meas, std::complex<double> z);

// Draw z ~ p(z) for the given state/measurement.
std::complex<double> sample_outcome(const GaussianState& state, int mode,
                                    const GaussianMeasurement& meas, RandomStream& rng);

// Measure mode 2 of a two-mode state, displace mode 1 by gain * outcome, and
// average over all outcomes:
//   cov_d = A + g^2 Sigma + g (C + C^T),  mean_d = X_1 + g X_2.
GaussianState average_feedforward(const GaussianState& two_mode,
                                  const GaussianMeasurement& meas, double gain);

GaussianState partial_trace(const GaussianState& state, const std::vector<int>& keep);

}  // namespace gaussclone
