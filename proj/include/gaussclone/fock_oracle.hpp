#pragma once

#include <complex>

#include <Eigen/Dense>

#include "gaussclone/gaussian_state.hpp"

namespace gaussclone {

// Brute-force verification backend in a truncated number basis. Everything
// here trades performance for independence from the moment calculus: states
// are built by exponentiating generators, measurements by projecting onto
// coherent vectors, fidelities by Hermitian eigendecomposition. Scope is
// ideal detection (eta = 1) and desk-size cutoffs.
//
// Two-mode index convention: |m, n> of modes (1, 2) sits at m * D + n.
//
// Truncation policy: constructors build amplitudes in a padded dimension and
// truncate without renormalizing, so 1 - trace is an honest leakage
// certificate, carried by every state and propagated through operations.

inline constexpr double kTruncTol = 1e-8;   // constructor certificate bound
inline constexpr double kTruncHard = 1e-3;  // downstream ops reject above this

// Sufficient cutoff for a displaced squeezed state (documented guard; the
// runtime check uses the actual deficit, which is much sharper).
int fock_guard_cutoff(std::complex<double> alpha, double r);

class FockDensityMatrix {
 public:
  static FockDensityMatrix from_pure(int cutoff, int n_modes, Eigen::VectorXcd psi,
                                     double deficit);
  static FockDensityMatrix from_matrix(int cutoff, int n_modes, Eigen::MatrixXcd rho,
                                       double deficit);

  int cutoff() const { return cutoff_; }
  int n_modes() const { return n_modes_; }
  int dim() const { return dim_; }

  bool is_pure() const { return pure_; }
  const Eigen::VectorXcd& pure_vector() const;  // only when is_pure()
  Eigen::MatrixXcd matrix() const;              // materializes for pure states

  double trace() const;
  double trunc_deficit() const { return deficit_; }

 private:
  FockDensityMatrix() = default;
  int cutoff_ = 0;
  int n_modes_ = 0;
  int dim_ = 0;
  bool pure_ = false;
  Eigen::VectorXcd psi_;
  Eigen::MatrixXcd rho_;
  double deficit_ = 0.0;
};

class FockOperator {
 public:
  FockOperator(int cutoff, int n_modes, Eigen::MatrixXcd mat);
  int cutoff() const { return cutoff_; }
  int n_modes() const { return n_modes_; }
  const Eigen::MatrixXcd& matrix() const { return mat_; }

 private:
  int cutoff_;
  int n_modes_;
  Eigen::MatrixXcd mat_;
};

// Annihilation operator on a D-dimensional truncated space.
Eigen::MatrixXcd fock_ladder(int cutoff);

// Unitaries by exponentiating the truncated (exactly anti-Hermitian)
// generator, so U^dag U = I holds to machine precision.
FockOperator fock_displacement(std::complex<double> alpha, int cutoff);
FockOperator fock_squeezer(double r, int cutoff);
// Two-mode beam splitter exp{theta (a1 a2^dag - a1^dag a2)}, theta =
// arccos(sqrt(tau)); the sign reproduces the moment map X -> S^T X exactly.
// Built per total-photon-number sector (the generator is block diagonal).
FockOperator fock_beamsplitter(double tau, int cutoff);

FockDensityMatrix fock_coherent(std::complex<double> alpha, int cutoff);
FockDensityMatrix fock_squeezed(std::complex<double> alpha, double r, int cutoff);
// D(alpha) S(r) rho_thermal(n_th) S^dag D^dag: the general single-mode
// Gaussian state with diagonal covariance.
FockDensityMatrix fock_gaussian_diag(std::complex<double> alpha, double r, double n_th,
                                     int cutoff);
// Lift of a diagonal-covariance single-mode Gaussian state (ShapeError on
// off-diagonal covariance).
FockDensityMatrix fock_from_gaussian(const GaussianState& state, int cutoff);

FockDensityMatrix fock_apply(const FockOperator& op, const FockDensityMatrix& rho);
FockDensityMatrix fock_tensor(const FockDensityMatrix& a, const FockDensityMatrix& b);
FockDensityMatrix fock_partial_trace(const FockDensityMatrix& two_mode, int keep_mode);

struct FockConditioned {
  FockDensityMatrix state;  // the kept mode, renormalized
  double density;           // Tr of the projected state / pi
};

// Ideal heterodyne on mode 2: project onto the truncated coherent vector
// |z> (exact amplitudes of the infinite-space vector, not renormalized, so
// the POVM stays the truncation of the ideal one).
FockConditioned fock_heterodyne_condition(const FockDensityMatrix& two_mode,
                                          std::complex<double> z);

// Uhlmann fidelity (Tr sqrt(sqrt(a) b sqrt(a)))^2 with eigenvalue clamping.
double fock_uhlmann_fidelity(const FockDensityMatrix& a, const FockDensityMatrix& b);

struct FockMoments {
  QuadVector mean;
  CovMatrix cov;
};

// First and symmetrized second quadrature moments, (x1, y1, x2, y2) order.
FockMoments fock_moments(const FockDensityMatrix& rho);

}  // namespace gaussclone
