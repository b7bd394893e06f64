#include "gaussclone/fock_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

namespace gaussclone {

namespace {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RowMajorMap =
    Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic,
                                   Eigen::RowMajor>>;

constexpr int kPad = 24;  // construction headroom above the requested cutoff

void check_cutoff(int cutoff, const char* where) {
  if (cutoff < 2 || cutoff > 4096)
    throw RangeError(std::string(where) + ": cutoff must lie in [2, 4096]");
}

// exp(G) for anti-Hermitian G via the Hermitian eigendecomposition of iG;
// exactly unitary up to rounding.
CMatrix expm_antihermitian(const CMatrix& gen) {
  const Complex imag_unit(0.0, 1.0);
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(imag_unit * gen);
  const CVector phases =
      ((-imag_unit) * solver.eigenvalues().cast<Complex>().array()).exp().matrix();
  return solver.eigenvectors() * phases.asDiagonal() *
         solver.eigenvectors().adjoint();
}

CVector ground_state(int dim) {
  CVector e0 = CVector::Zero(dim);
  e0[0] = 1.0;
  return e0;
}

// Amplitudes of the ideal coherent vector |z> restricted to the truncated
// space (no renormalization).
CVector coherent_amplitudes(Complex z, int cutoff) {
  CVector c(cutoff);
  c[0] = std::exp(-0.5 * std::norm(z));
  for (int n = 1; n < cutoff; ++n) c[n] = c[n - 1] * z / std::sqrt(double(n));
  return c;
}

double clamp01(double x) { return std::min(std::max(x, 0.0), 1.0); }

FockDensityMatrix truncate_pure(const CVector& padded, int cutoff, const char* where) {
  const CVector head = padded.head(cutoff);
  const double deficit = clamp01(1.0 - head.squaredNorm());
  if (deficit > kTruncTol)
    throw TruncationError(std::string(where) + ": trace deficit " +
                          std::to_string(deficit) + " exceeds " +
                          std::to_string(kTruncTol) + "; raise the cutoff");
  return FockDensityMatrix::from_pure(cutoff, 1, head, deficit);
}

double two_mode_expect(const FockDensityMatrix& rho, const CMatrix& a_op,
                       const CMatrix& b_op) {
  const int d = rho.cutoff();
  if (rho.is_pure()) {
    RowMajorMap psi(rho.pure_vector().data(), d, d);
    const CMatrix w = a_op * psi * b_op.transpose();
    return (psi.conjugate().cwiseProduct(w)).sum().real();
  }
  const CMatrix mat = rho.matrix();
  Complex total = 0.0;
  for (int m = 0; m < d; ++m)
    for (int n = 0; n < d; ++n)
      for (int mp = 0; mp < d; ++mp)
        for (int np = 0; np < d; ++np)
          total += mat(m * d + n, mp * d + np) * a_op(mp, m) * b_op(np, n);
  return total.real();
}

void check_deficit(const FockDensityMatrix& rho, const char* where) {
  if (rho.trunc_deficit() > kTruncHard)
    throw TruncationError(std::string(where) + ": input certificate " +
                          std::to_string(rho.trunc_deficit()) +
                          " is beyond rescue; rebuild with a larger cutoff");
}

}  // namespace

int fock_guard_cutoff(std::complex<double> alpha, double r) {
  const double sh = std::sinh(r);
  return static_cast<int>(std::ceil(8.0 * (std::norm(alpha) + sh * sh) + 20.0));
}

FockDensityMatrix FockDensityMatrix::from_pure(int cutoff, int n_modes, CVector psi,
                                               double deficit) {
  check_cutoff(cutoff, "FockDensityMatrix");
  if (n_modes != 1 && n_modes != 2)
    throw DimensionError("FockDensityMatrix: n_modes must be 1 or 2");
  FockDensityMatrix out;
  out.cutoff_ = cutoff;
  out.n_modes_ = n_modes;
  out.dim_ = n_modes == 1 ? cutoff : cutoff * cutoff;
  if (psi.size() != out.dim_)
    throw DimensionError("FockDensityMatrix: vector length must be cutoff^n_modes");
  if (!psi.allFinite()) throw RangeError("FockDensityMatrix: amplitudes must be finite");
  out.pure_ = true;
  out.psi_ = std::move(psi);
  out.deficit_ = clamp01(deficit);
  return out;
}

FockDensityMatrix FockDensityMatrix::from_matrix(int cutoff, int n_modes, CMatrix rho,
                                                 double deficit) {
  check_cutoff(cutoff, "FockDensityMatrix");
  if (n_modes != 1 && n_modes != 2)
    throw DimensionError("FockDensityMatrix: n_modes must be 1 or 2");
  FockDensityMatrix out;
  out.cutoff_ = cutoff;
  out.n_modes_ = n_modes;
  out.dim_ = n_modes == 1 ? cutoff : cutoff * cutoff;
  if (rho.rows() != out.dim_ || rho.cols() != out.dim_)
    throw DimensionError("FockDensityMatrix: matrix must be dim x dim");
  if (!rho.allFinite()) throw RangeError("FockDensityMatrix: entries must be finite");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
    throw ShapeError("FockDensityMatrix: matrix not Hermitian");
  out.pure_ = false;
  out.rho_ = ((rho + rho.adjoint()) / 2.0).eval();
  out.deficit_ = clamp01(deficit);
  return out;
}

const CVector& FockDensityMatrix::pure_vector() const {
  if (!pure_) throw ShapeError("FockDensityMatrix: state is not stored in pure form");
  return psi_;
}

CMatrix FockDensityMatrix::matrix() const {
  if (pure_) return psi_ * psi_.adjoint();
  return rho_;
}

double FockDensityMatrix::trace() const {
  if (pure_) return psi_.squaredNorm();
  return rho_.trace().real();
}

FockOperator::FockOperator(int cutoff, int n_modes, CMatrix mat)
    : cutoff_(cutoff), n_modes_(n_modes), mat_(std::move(mat)) {
  check_cutoff(cutoff_, "FockOperator");
  if (n_modes_ != 1 && n_modes_ != 2)
    throw DimensionError("FockOperator: n_modes must be 1 or 2");
  const int dim = n_modes_ == 1 ? cutoff_ : cutoff_ * cutoff_;
  if (mat_.rows() != dim || mat_.cols() != dim)
    throw DimensionError("FockOperator: matrix must be dim x dim");
  if (!mat_.allFinite()) throw RangeError("FockOperator: entries must be finite");
}

CMatrix fock_ladder(int cutoff) {
  check_cutoff(cutoff, "fock_ladder");
  CMatrix a = CMatrix::Zero(cutoff, cutoff);
  for (int n = 1; n < cutoff; ++n) a(n - 1, n) = std::sqrt(double(n));
  return a;
}

FockOperator fock_displacement(Complex alpha, int cutoff) {
  if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag()))
    throw RangeError("fock_displacement: alpha must be finite");
  const CMatrix a = fock_ladder(cutoff);
  const CMatrix gen = alpha * a.adjoint() - std::conj(alpha) * a;
  return FockOperator(cutoff, 1, expm_antihermitian(gen));
}

FockOperator fock_squeezer(double r, int cutoff) {
  if (!(std::abs(r) <= 10.0)) throw RangeError("fock_squeezer: |r| must be <= 10");
  const CMatrix a = fock_ladder(cutoff);
  const CMatrix adag2 = a.adjoint() * a.adjoint();
  const CMatrix gen = 0.5 * r * (adag2 - adag2.adjoint());
  return FockOperator(cutoff, 1, expm_antihermitian(gen));
}

FockOperator fock_beamsplitter(double tau, int cutoff) {
  if (!(tau >= 0.0 && tau <= 1.0))
    throw RangeError("fock_beamsplitter: transmissivity must lie in [0, 1]");
  check_cutoff(cutoff, "fock_beamsplitter");
  const double theta = std::acos(std::sqrt(tau));
  const int d = cutoff;

  // The generator theta (a1 a2^dag - a1^dag a2) conserves total photon
  // number, so exponentiate sector by sector instead of on the D^2 space.
  CMatrix full = CMatrix::Zero(d * d, d * d);
  for (int total = 0; total <= 2 * (d - 1); ++total) {
    const int m_lo = std::max(0, total - (d - 1));
    const int m_hi = std::min(total, d - 1);
    const int len = m_hi - m_lo + 1;
    CMatrix gen = CMatrix::Zero(len, len);
    for (int k = 0; k + 1 < len; ++k) {
      const int m = m_lo + k;
      const int n = total - m;
      const double coupling = theta * std::sqrt(double(m + 1) * double(n));
      gen(k, k + 1) = coupling;
      gen(k + 1, k) = -coupling;
    }
    const CMatrix block = expm_antihermitian(gen);
    for (int k = 0; k < len; ++k) {
      const int row = (m_lo + k) * d + (total - m_lo - k);
      for (int l = 0; l < len; ++l)
        full(row, (m_lo + l) * d + (total - m_lo - l)) = block(k, l);
    }
  }
  return FockOperator(cutoff, 2, std::move(full));
}

FockDensityMatrix fock_coherent(Complex alpha, int cutoff) {
  check_cutoff(cutoff, "fock_coherent");
  const int padded = cutoff + kPad;
  const CVector psi = fock_displacement(alpha, padded).matrix() * ground_state(padded);
  return truncate_pure(psi, cutoff, "fock_coherent");
}

FockDensityMatrix fock_squeezed(Complex alpha, double r, int cutoff) {
  check_cutoff(cutoff, "fock_squeezed");
  const int padded = cutoff + kPad;
  const CVector squeezed = fock_squeezer(r, padded).matrix() * ground_state(padded);
  const CVector psi = fock_displacement(alpha, padded).matrix() * squeezed;
  return truncate_pure(psi, cutoff, "fock_squeezed");
}

FockDensityMatrix fock_gaussian_diag(Complex alpha, double r, double n_th, int cutoff) {
  if (!(n_th >= 0.0))
    throw RangeError("fock_gaussian_diag: thermal photon number must be >= 0");
  if (n_th < 1e-14) return fock_squeezed(alpha, r, cutoff);

  check_cutoff(cutoff, "fock_gaussian_diag");
  const int padded = cutoff + kPad;
  const double ratio = n_th / (1.0 + n_th);
  CVector thermal(padded);
  double p = 1.0 / (1.0 + n_th);
  for (int n = 0; n < padded; ++n) {
    thermal[n] = p;
    p *= ratio;
  }
  const CMatrix unitary = fock_displacement(alpha, padded).matrix() *
                          fock_squeezer(r, padded).matrix();
  const CMatrix rho_padded =
      unitary * thermal.asDiagonal() * unitary.adjoint();
  const CMatrix block = rho_padded.topLeftCorner(cutoff, cutoff);
  const double deficit = clamp01(1.0 - block.trace().real());
  if (deficit > kTruncTol)
    throw TruncationError("fock_gaussian_diag: trace deficit " +
                          std::to_string(deficit) + " exceeds " +
                          std::to_string(kTruncTol) + "; raise the cutoff");
  return FockDensityMatrix::from_matrix(cutoff, 1, block, deficit);
}

FockDensityMatrix fock_from_gaussian(const GaussianState& state, int cutoff) {
  if (state.n_modes() != 1)
    throw DimensionError("fock_from_gaussian: state must be single-mode");
  const Eigen::Matrix2d cov = state.cov();
  if (std::abs(cov(0, 1)) > 1e-9)
    throw ShapeError("fock_from_gaussian: covariance must be diagonal");

  const Complex alpha(state.mean()[0] / std::numbers::sqrt2,
                      state.mean()[1] / std::numbers::sqrt2);
  const double nu = std::sqrt(cov(0, 0) * cov(1, 1));
  const double n_th = std::max(nu - 0.5, 0.0);
  const double r = 0.25 * std::log(cov(0, 0) / cov(1, 1));
  return fock_gaussian_diag(alpha, r, n_th, cutoff);
}

FockDensityMatrix fock_apply(const FockOperator& op, const FockDensityMatrix& rho) {
  if (op.cutoff() != rho.cutoff() || op.n_modes() != rho.n_modes())
    throw DimensionError("fock_apply: operator and state dimensions differ");
  if (rho.is_pure())
    return FockDensityMatrix::from_pure(rho.cutoff(), rho.n_modes(),
                                        op.matrix() * rho.pure_vector(),
                                        rho.trunc_deficit());
  return FockDensityMatrix::from_matrix(
      rho.cutoff(), rho.n_modes(), op.matrix() * rho.matrix() * op.matrix().adjoint(),
      rho.trunc_deficit());
}

FockDensityMatrix fock_tensor(const FockDensityMatrix& a, const FockDensityMatrix& b) {
  if (a.n_modes() != 1 || b.n_modes() != 1)
    throw DimensionError("fock_tensor: factors must be single-mode");
  if (a.cutoff() != b.cutoff())
    throw DimensionError("fock_tensor: factors must share the cutoff");
  const int d = a.cutoff();
  const double deficit = a.trunc_deficit() + b.trunc_deficit() -
                         a.trunc_deficit() * b.trunc_deficit();

  if (a.is_pure() && b.is_pure()) {
    CVector psi(d * d);
    for (int m = 0; m < d; ++m)
      psi.segment(m * d, d) = a.pure_vector()[m] * b.pure_vector();
    return FockDensityMatrix::from_pure(d, 2, std::move(psi), deficit);
  }
  const CMatrix ma = a.matrix();
  const CMatrix mb = b.matrix();
  CMatrix rho(d * d, d * d);
  for (int m = 0; m < d; ++m)
    for (int mp = 0; mp < d; ++mp)
      rho.block(m * d, mp * d, d, d) = ma(m, mp) * mb;
  return FockDensityMatrix::from_matrix(d, 2, std::move(rho), deficit);
}

FockDensityMatrix fock_partial_trace(const FockDensityMatrix& two_mode, int keep_mode) {
  if (two_mode.n_modes() != 2)
    throw DimensionError("fock_partial_trace: state must be two-mode");
  if (keep_mode != 0 && keep_mode != 1)
    throw IndexError("fock_partial_trace: keep_mode must be 0 or 1");
  const int d = two_mode.cutoff();

  CMatrix reduced;
  if (two_mode.is_pure()) {
    RowMajorMap psi(two_mode.pure_vector().data(), d, d);
    if (keep_mode == 0)
      reduced = psi * psi.adjoint();
    else
      reduced = psi.transpose() * psi.conjugate();
  } else {
    const CMatrix mat = two_mode.matrix();
    reduced = CMatrix::Zero(d, d);
    if (keep_mode == 0) {
      for (int m = 0; m < d; ++m)
        for (int mp = 0; mp < d; ++mp)
          for (int n = 0; n < d; ++n) reduced(m, mp) += mat(m * d + n, mp * d + n);
    } else {
      for (int n = 0; n < d; ++n)
        for (int np = 0; np < d; ++np)
          for (int m = 0; m < d; ++m) reduced(n, np) += mat(m * d + n, m * d + np);
    }
  }
  return FockDensityMatrix::from_matrix(d, 1, std::move(reduced),
                                        two_mode.trunc_deficit());
}

FockConditioned fock_heterodyne_condition(const FockDensityMatrix& two_mode, Complex z) {
  if (two_mode.n_modes() != 2)
    throw DimensionError("fock_heterodyne_condition: state must be two-mode");
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw RangeError("fock_heterodyne_condition: outcome must be finite");
  check_deficit(two_mode, "fock_heterodyne_condition");

  const int d = two_mode.cutoff();
  const CVector amps = coherent_amplitudes(z, d);

  if (two_mode.is_pure()) {
    RowMajorMap psi(two_mode.pure_vector().data(), d, d);
    const CVector phi = psi * amps.conjugate();
    const double weight = phi.squaredNorm();
    if (weight < 1e-280)
      throw TruncationError("fock_heterodyne_condition: outcome weight vanishes");
    return FockConditioned{
        FockDensityMatrix::from_pure(d, 1, phi / std::sqrt(weight),
                                     two_mode.trunc_deficit()),
        weight / std::numbers::pi};
  }

  const CMatrix mat = two_mode.matrix();
  CMatrix projected = CMatrix::Zero(d, d);
  for (int m = 0; m < d; ++m)
    for (int mp = 0; mp < d; ++mp) {
      Complex entry = 0.0;
      for (int n = 0; n < d; ++n)
        for (int np = 0; np < d; ++np)
          entry += std::conj(amps[n]) * mat(m * d + n, mp * d + np) * amps[np];
      projected(m, mp) = entry;
    }
  const double weight = projected.trace().real();
  if (weight < 1e-280)
    throw TruncationError("fock_heterodyne_condition: outcome weight vanishes");
  return FockConditioned{FockDensityMatrix::from_matrix(d, 1, projected / weight,
                                                        two_mode.trunc_deficit()),
                         weight / std::numbers::pi};
}

double fock_uhlmann_fidelity(const FockDensityMatrix& a, const FockDensityMatrix& b) {
  if (a.cutoff() != b.cutoff() || a.n_modes() != b.n_modes())
    throw DimensionError("fock_uhlmann_fidelity: states must share dimensions");
  check_deficit(a, "fock_uhlmann_fidelity");
  check_deficit(b, "fock_uhlmann_fidelity");

  Eigen::SelfAdjointEigenSolver<CMatrix> solver_a(a.matrix());
  const CVector root_eigs =
      solver_a.eigenvalues().cwiseMax(0.0).cwiseSqrt().cast<Complex>();
  const CMatrix sqrt_a = solver_a.eigenvectors() * root_eigs.asDiagonal() *
                         solver_a.eigenvectors().adjoint();
  Eigen::SelfAdjointEigenSolver<CMatrix> solver_m(sqrt_a * b.matrix() * sqrt_a);
  const double root_sum = solver_m.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return root_sum * root_sum;
}

FockMoments fock_moments(const FockDensityMatrix& rho) {
  const int d = rho.cutoff();
  const CMatrix a = fock_ladder(d);
  const CMatrix x_op = (a + a.adjoint()) / std::numbers::sqrt2;
  const CMatrix y_op = (a - a.adjoint()) / Complex(0.0, std::numbers::sqrt2);

  const auto single = [&](const FockDensityMatrix& state, Eigen::Vector2d& mean,
                          Eigen::Matrix2d& cov) {
    const auto expect = [&](const CMatrix& op) {
      if (state.is_pure())
        return (state.pure_vector().adjoint() * op * state.pure_vector())(0).real();
      return (state.matrix() * op).trace().real();
    };
    mean[0] = expect(x_op);
    mean[1] = expect(y_op);
    cov(0, 0) = expect(x_op * x_op) - mean[0] * mean[0];
    cov(1, 1) = expect(y_op * y_op) - mean[1] * mean[1];
    cov(0, 1) = expect(0.5 * (x_op * y_op + y_op * x_op)) - mean[0] * mean[1];
    cov(1, 0) = cov(0, 1);
  };

  FockMoments out;
  if (rho.n_modes() == 1) {
    Eigen::Vector2d mean;
    Eigen::Matrix2d cov;
    single(rho, mean, cov);
    out.mean = mean;
    out.cov = cov;
    return out;
  }

  Eigen::Vector2d mean1, mean2;
  Eigen::Matrix2d cov1, cov2;
  single(fock_partial_trace(rho, 0), mean1, cov1);
  single(fock_partial_trace(rho, 1), mean2, cov2);

  Eigen::Matrix2d cross;
  const CMatrix* ops[2] = {&x_op, &y_op};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      cross(i, j) = two_mode_expect(rho, *ops[i], *ops[j]) - mean1[i] * mean2[j];

  out.mean.resize(4);
  out.mean << mean1, mean2;
  out.cov = CovMatrix::Zero(4, 4);
  out.cov.block<2, 2>(0, 0) = cov1;
  out.cov.block<2, 2>(2, 2) = cov2;
  out.cov.block<2, 2>(0, 2) = cross;
  out.cov.block<2, 2>(2, 0) = cross.transpose();
  return out;
}

}  // namespace gaussclone
