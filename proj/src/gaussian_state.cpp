#include "gaussclone/gaussian_state.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace gaussclone {

namespace {

constexpr double kPi = std::numbers::pi;

void check_mode_index(int mode, int n_modes, const char* where) {
  if (mode < 0 || mode >= n_modes)
    throw IndexError(std::string(where) + ": mode index " + std::to_string(mode) +
                     " out of range for " + std::to_string(n_modes) + " modes");
}

// 2x2 inverse with an explicit singularity guard. All measurement-update
// matrices in this module are 2x2, so no general pivoted path is needed.
Eigen::Matrix2d inverse_2x2(const Eigen::Matrix2d& m, const char* where) {
  const double det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  if (!(std::abs(det) > 1e-300))
    throw SingularMatrixError(std::string(where) + ": 2x2 matrix is singular");
  Eigen::Matrix2d inv;
  inv << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
  return inv / det;
}

Eigen::Vector2d outcome_vector(std::complex<double> z) {
  return Eigen::Vector2d(std::numbers::sqrt2 * z.real(), std::numbers::sqrt2 * z.imag());
}

struct MeasurementBlocks {
  Eigen::MatrixXd a;       // kept-modes covariance
  Eigen::MatrixXd c;       // kept x measured cross covariance
  Eigen::Matrix2d sigma;   // measured block + noise
  Eigen::VectorXd mean_a;  // kept-modes mean
  Eigen::Vector2d mean_b;  // measured-mode mean
  std::vector<int> keep;
};

MeasurementBlocks split_for_measurement(const GaussianState& state, int mode,
                                        const GaussianMeasurement& meas) {
  const int n = state.n_modes();
  MeasurementBlocks blocks;
  blocks.keep.reserve(n - 1);
  for (int m = 0; m < n; ++m)
    if (m != mode) blocks.keep.push_back(m);

  const int k = 2 * (n - 1);
  blocks.a.resize(k, k);
  blocks.c.resize(k, 2);
  blocks.mean_a.resize(k);
  for (int i = 0; i < n - 1; ++i) {
    const int mi = blocks.keep[i];
    blocks.mean_a.segment<2>(2 * i) = state.mean().segment<2>(2 * mi);
    blocks.c.block<2, 2>(2 * i, 0) = state.cov().block<2, 2>(2 * mi, 2 * mode);
    for (int j = 0; j < n - 1; ++j)
      blocks.a.block<2, 2>(2 * i, 2 * j) =
          state.cov().block<2, 2>(2 * mi, 2 * blocks.keep[j]);
  }
  blocks.sigma = state.cov().block<2, 2>(2 * mode, 2 * mode) + meas.cov();
  blocks.mean_b = state.mean().segment<2>(2 * mode);
  return blocks;
}

}  // namespace

Eigen::MatrixXd symplectic_form(int n_modes) {
  if (n_modes < 1) throw DimensionError("symplectic_form: need at least one mode");
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * n_modes, 2 * n_modes);
  for (int m = 0; m < n_modes; ++m) {
    omega(2 * m, 2 * m + 1) = 1.0;
    omega(2 * m + 1, 2 * m) = -1.0;
  }
  return omega;
}

Eigen::VectorXd symplectic_eigenvalues(const CovMatrix& cov) {
  const int size = static_cast<int>(cov.rows());
  if (size % 2 != 0 || cov.cols() != size || size < 2)
    throw DimensionError("symplectic_eigenvalues: covariance must be 2n x 2n");
  const int n = size / 2;

  Eigen::VectorXd nu(n);
  if (n == 1) {
    nu[0] = std::sqrt(std::max(cov.determinant(), 0.0));
    return nu;
  }

  // With sigma = L L^T, Omega sigma is similar to the antisymmetric
  // K = L^T Omega L, whose singular values are the symplectic eigenvalues in
  // pairs. The SVD keeps full accuracy for degenerate spectra (pure states),
  // where invariant-based formulas lose half the digits to cancellation.
  const Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() == Eigen::Success) {
    const Eigen::MatrixXd l = llt.matrixL();
    Eigen::MatrixXd k = l.transpose() * symplectic_form(n) * l;
    k = ((k - k.transpose()) / 2.0).eval();
    const Eigen::VectorXd s = Eigen::JacobiSVD<Eigen::MatrixXd>(k).singularValues();
    for (int j = 0; j < n; ++j) nu[n - 1 - j] = 0.5 * (s[2 * j] + s[2 * j + 1]);
    return nu;
  }

  // Not positive definite (unphysical input): fall back to the spectrum of
  // Omega sigma, which comes in pairs +- i nu.
  Eigen::EigenSolver<Eigen::MatrixXd> solver(symplectic_form(n) * cov, false);
  Eigen::VectorXd mags = solver.eigenvalues().cwiseAbs();
  std::sort(mags.data(), mags.data() + mags.size());
  for (int k = 0; k < n; ++k) nu[k] = 0.5 * (mags[2 * k] + mags[2 * k + 1]);
  return nu;
}

GaussianState::GaussianState(QuadVector mean, CovMatrix cov)
    : mean_(std::move(mean)), cov_(std::move(cov)) {
  const int size = static_cast<int>(mean_.size());
  if (size < 2 || size % 2 != 0)
    throw DimensionError("GaussianState: mean length must be a positive multiple of 2");
  if (cov_.rows() != size || cov_.cols() != size)
    throw DimensionError("GaussianState: covariance must be " + std::to_string(size) +
                         "x" + std::to_string(size));
  if (!mean_.allFinite() || !cov_.allFinite())
    throw RangeError("GaussianState: moments must be finite");
  if ((cov_ - cov_.transpose()).cwiseAbs().maxCoeff() > kSymTol)
    throw ShapeError("GaussianState: covariance not symmetric");
  cov_ = ((cov_ + cov_.transpose()) / 2.0).eval();

  n_modes_ = size / 2;
  const Eigen::VectorXd nu = symplectic_eigenvalues(cov_);
  if (nu.minCoeff() < 0.5 - kSymTol)
    throw RangeError("GaussianState: covariance violates the uncertainty bound (min "
                     "symplectic eigenvalue " +
                     std::to_string(nu.minCoeff()) + ")");
}

Eigen::Vector2d GaussianState::mode_mean(int mode) const {
  check_mode_index(mode, n_modes_, "mode_mean");
  return mean_.segment<2>(2 * mode);
}

Eigen::Matrix2d GaussianState::mode_cov(int mode) const {
  check_mode_index(mode, n_modes_, "mode_cov");
  return cov_.block<2, 2>(2 * mode, 2 * mode);
}

GaussianState vacuum() {
  return GaussianState(Eigen::Vector2d::Zero(),
                       Eigen::Matrix2d::Identity() * kVacuumVariance);
}

GaussianState coherent(std::complex<double> alpha) {
  if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag()))
    throw RangeError("coherent: alpha must be finite");
  return GaussianState(outcome_vector(alpha), Eigen::Matrix2d::Identity() * kVacuumVariance);
}

GaussianState squeezed_coherent(std::complex<double> alpha, double r) {
  if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag()))
    throw RangeError("squeezed_coherent: alpha must be finite");
  if (!(std::abs(r) <= 10.0))
    throw RangeError("squeezed_coherent: |r| must be <= 10");
  Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
  cov(0, 0) = 0.5 * std::exp(2.0 * r);
  cov(1, 1) = 0.5 * std::exp(-2.0 * r);
  return GaussianState(outcome_vector(alpha), cov);
}

GaussianState squeezed_thermal(double n_th, double s) {
  if (!(n_th >= 0.0))
    throw RangeError("squeezed_thermal: thermal photon number must be >= 0");
  if (!(std::abs(s) <= 10.0))
    throw RangeError("squeezed_thermal: |s| must be <= 10");
  Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
  cov(0, 0) = 0.5 * (2.0 * n_th + 1.0) * std::exp(2.0 * s);
  cov(1, 1) = 0.5 * (2.0 * n_th + 1.0) * std::exp(-2.0 * s);
  return GaussianState(Eigen::Vector2d::Zero(), cov);
}

GaussianState tensor(const GaussianState& a, const GaussianState& b) {
  const int na = 2 * a.n_modes();
  const int nb = 2 * b.n_modes();
  QuadVector mean(na + nb);
  mean << a.mean(), b.mean();
  CovMatrix cov = CovMatrix::Zero(na + nb, na + nb);
  cov.topLeftCorner(na, na) = a.cov();
  cov.bottomRightCorner(nb, nb) = b.cov();
  return GaussianState(std::move(mean), std::move(cov));
}

SymplecticOp::SymplecticOp(Eigen::MatrixXd matrix) : matrix_(std::move(matrix)) {
  const int size = static_cast<int>(matrix_.rows());
  if (size < 2 || size % 2 != 0 || matrix_.cols() != size)
    throw DimensionError("SymplecticOp: matrix must be 2n x 2n");
  if (!matrix_.allFinite()) throw RangeError("SymplecticOp: entries must be finite");
  const Eigen::MatrixXd omega = symplectic_form(size / 2);
  const double defect =
      (matrix_.transpose() * omega * matrix_ - omega).cwiseAbs().maxCoeff();
  if (defect > kSymTol)
    throw RangeError("SymplecticOp: matrix is not symplectic (defect " +
                     std::to_string(defect) + ")");
}

SymplecticOp bs_symplectic(double tau, int n_modes, std::pair<int, int> modes) {
  if (!(tau >= 0.0 && tau <= 1.0))
    throw RangeError("bs_symplectic: transmissivity must lie in [0, 1]");
  check_mode_index(modes.first, n_modes, "bs_symplectic");
  check_mode_index(modes.second, n_modes, "bs_symplectic");
  if (modes.first == modes.second)
    throw IndexError("bs_symplectic: beam splitter needs two distinct modes");

  const double t = std::sqrt(tau);
  const double rfl = std::sqrt(1.0 - tau);
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes);
  const int i = 2 * modes.first;
  const int j = 2 * modes.second;
  s.block<2, 2>(i, i) = t * Eigen::Matrix2d::Identity();
  s.block<2, 2>(i, j) = rfl * Eigen::Matrix2d::Identity();
  s.block<2, 2>(j, i) = -rfl * Eigen::Matrix2d::Identity();
  s.block<2, 2>(j, j) = t * Eigen::Matrix2d::Identity();
  return SymplecticOp(std::move(s));
}

GaussianState apply_symplectic(const GaussianState& state, const SymplecticOp& op) {
  if (op.n_modes() != state.n_modes())
    throw DimensionError("apply_symplectic: operator acts on " +
                         std::to_string(op.n_modes()) + " modes, state has " +
                         std::to_string(state.n_modes()));
  const Eigen::MatrixXd& s = op.matrix();
  return GaussianState(s.transpose() * state.mean(),
                       s.transpose() * state.cov() * s);
}

GaussianState displace(const GaussianState& state, int mode, std::complex<double> z,
                       double gain) {
  check_mode_index(mode, state.n_modes(), "displace");
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || !std::isfinite(gain))
    throw RangeError("displace: outcome and gain must be finite");
  QuadVector mean = state.mean();
  mean.segment<2>(2 * mode) += gain * outcome_vector(z);
  return GaussianState(std::move(mean), state.cov());
}

GaussianMeasurement::GaussianMeasurement(Eigen::Matrix2d cov) : cov_(std::move(cov)) {
  if (!cov_.allFinite()) throw RangeError("GaussianMeasurement: entries must be finite");
  if (std::abs(cov_(0, 1) - cov_(1, 0)) > kSymTol)
    throw ShapeError("GaussianMeasurement: noise covariance not symmetric");
  cov_ = ((cov_ + cov_.transpose()) / 2.0).eval();
  const double det = cov_.determinant();
  if (cov_(0, 0) <= 0.0 || det < 0.25 - kSymTol)
    throw RangeError("GaussianMeasurement: noise covariance must satisfy det >= 1/4");
}

GaussianMeasurement GaussianMeasurement::heterodyne(double eta) {
  if (!(eta > 0.0 && eta <= 1.0))
    throw RangeError("heterodyne: efficiency must lie in (0, 1]");
  const double var = (2.0 - eta) / (2.0 * eta);
  return GaussianMeasurement(Eigen::Matrix2d::Identity() * var);
}

double outcome_density(const GaussianState& state, int mode,
                       const GaussianMeasurement& meas, std::complex<double> z) {
  check_mode_index(mode, state.n_modes(), "outcome_density");
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw RangeError("outcome_density: outcome must be finite");
  const Eigen::Matrix2d sigma =
      state.cov().block<2, 2>(2 * mode, 2 * mode) + meas.cov();
  const Eigen::Matrix2d inv = inverse_2x2(sigma, "outcome_density");
  const Eigen::Vector2d d = outcome_vector(z) - state.mean().segment<2>(2 * mode);
  const double quad = d.dot(inv * d);
  return std::exp(-0.5 * quad) / (kPi * std::sqrt(sigma.determinant()));
}

Conditioned measure_mode(const GaussianState& state, int mode,
                         const GaussianMeasurement& meas, std::complex<double> z) {
  if (state.n_modes() < 2)
    throw DimensionError("measure_mode: need at least two modes to condition on one");
  check_mode_index(mode, state.n_modes(), "measure_mode");
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw RangeError("measure_mode: outcome must be finite");

  const MeasurementBlocks blocks = split_for_measurement(state, mode, meas);
  const Eigen::Matrix2d inv = inverse_2x2(blocks.sigma, "measure_mode");
  const Eigen::Vector2d d = outcome_vector(z) - blocks.mean_b;

  CovMatrix cov = blocks.a - blocks.c * inv * blocks.c.transpose();
  QuadVector mean = blocks.mean_a + blocks.c * inv * d;
  const double density =
      std::exp(-0.5 * d.dot(inv * d)) / (kPi * std::sqrt(blocks.sigma.determinant()));
  return Conditioned{GaussianState(std::move(mean), std::move(cov)), density};
}

std::complex<double> sample_outcome(const GaussianState& state, int mode,
                                    const GaussianMeasurement& meas, RandomStream& rng) {
  check_mode_index(mode, state.n_modes(), "sample_outcome");
  const Eigen::Matrix2d sigma =
      state.cov().block<2, 2>(2 * mode, 2 * mode) + meas.cov();
  // 2x2 Cholesky; sigma is positive definite for every physical state.
  const double l11 = std::sqrt(sigma(0, 0));
  const double l21 = sigma(1, 0) / l11;
  const double l22 = std::sqrt(std::max(sigma(1, 1) - l21 * l21, 0.0));
  const double n1 = rng.normal();
  const double n2 = rng.normal();
  const Eigen::Vector2d xm = state.mean().segment<2>(2 * mode) +
                             Eigen::Vector2d(l11 * n1, l21 * n1 + l22 * n2);
  return std::complex<double>(xm[0], xm[1]) / std::numbers::sqrt2;
}

GaussianState average_feedforward(const GaussianState& two_mode,
                                  const GaussianMeasurement& meas, double gain) {
  if (two_mode.n_modes() != 2)
    throw DimensionError("average_feedforward: state must have exactly two modes");
  if (!std::isfinite(gain)) throw RangeError("average_feedforward: gain must be finite");

  const Eigen::Matrix2d a = two_mode.cov().block<2, 2>(0, 0);
  const Eigen::Matrix2d c = two_mode.cov().block<2, 2>(0, 2);
  const Eigen::Matrix2d sigma = two_mode.cov().block<2, 2>(2, 2) + meas.cov();
  const Eigen::Matrix2d cov =
      a + gain * gain * sigma + gain * (c + c.transpose());
  const Eigen::Vector2d mean =
      two_mode.mean().segment<2>(0) + gain * two_mode.mean().segment<2>(2);
  return GaussianState(mean, cov);
}

GaussianState partial_trace(const GaussianState& state, const std::vector<int>& keep) {
  if (keep.empty()) throw IndexError("partial_trace: keep list must not be empty");
  for (std::size_t i = 0; i < keep.size(); ++i) {
    check_mode_index(keep[i], state.n_modes(), "partial_trace");
    for (std::size_t j = i + 1; j < keep.size(); ++j)
      if (keep[i] == keep[j])
        throw IndexError("partial_trace: keep list has duplicate mode " +
                         std::to_string(keep[i]));
  }

  const int k = static_cast<int>(keep.size());
  QuadVector mean(2 * k);
  CovMatrix cov(2 * k, 2 * k);
  for (int i = 0; i < k; ++i) {
    mean.segment<2>(2 * i) = state.mean().segment<2>(2 * keep[i]);
    for (int j = 0; j < k; ++j)
      cov.block<2, 2>(2 * i, 2 * j) = state.cov().block<2, 2>(2 * keep[i], 2 * keep[j]);
  }
  return GaussianState(std::move(mean), std::move(cov));
}

}  // namespace gaussclone
