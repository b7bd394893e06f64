#pragma once

#include "gaussclone/gaussian_state.hpp"

namespace gaussclone {

struct FidelityReport {
  double fidelity;
  double delta;    // 4 (det a - 1/4)(det b - 1/4), clamped at 0
  double det_sum;  // det(cov_a + cov_b)
};

// Fidelity between two single-mode Gaussian states:
//   F = exp(-dX^T (cov_a + cov_b)^{-1} dX / 2) / (sqrt(det_sum + delta) - sqrt(delta)).
// delta factors that round to just below zero for pure states are clamped.
FidelityReport gaussian_fidelity(const GaussianState& a, const GaussianState& b);

// Fidelity of either clone of the symmetric machine (tau1 = tau2 = 1/2,
// g = +1, zero-mean ancilla) to the input with covariance sigma_k. The clone
// keeps the input mean, so only covariances enter:
//   clone cov = sigma_k + (sigma_3 + sigma_m) / 2.
double symmetric_cloning_fidelity(const Eigen::Matrix2d& sigma_k,
                                  const Eigen::Matrix2d& sigma_3,
                                  const Eigen::Matrix2d& sigma_m);

// Closed-form fidelity-maximizing ancilla squeezing for diagonal sigma_k and
// sigma_m: s = log[(4 sigma_k_11 + sigma_m_11) / (4 sigma_k_22 + sigma_m_22)] / 4.
// Exact when sigma_k is pure; throws ShapeError on non-diagonal input.
double optimal_ancilla_squeezing(const Eigen::Matrix2d& sigma_k,
                                 const Eigen::Matrix2d& sigma_m);

struct AncillaOptimum {
  double s_star;        // numeric argmax over the ancilla squeezing
  double f_star;        // fidelity at the optimum
  double n_th_argmax;   // argmax over the thermal-photon grid (expected: 0)
};

// Direct numeric maximization of the symmetric-machine fidelity over
// squeezed thermal ancillas; cross-check for the closed form above.
AncillaOptimum maximize_fidelity_numeric(const Eigen::Matrix2d& sigma_k,
                                         const Eigen::Matrix2d& sigma_m);

// Relative fidelity gain of the optimally squeezed ancilla over the vacuum
// ancilla when cloning a squeezed vacuum input of parameter r with detection
// efficiency eta: (F_opt - F_vac) / F_vac.
double enhancement(double r, double eta);

}  // namespace gaussclone
