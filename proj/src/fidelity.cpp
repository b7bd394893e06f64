#include "gaussclone/fidelity.hpp"

#include <cmath>

namespace gaussclone {

namespace {

constexpr double kDetClamp = 1e-12;

double det2(const Eigen::Matrix2d& m) { return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0); }

void check_cov_2x2(const Eigen::Matrix2d& m, const char* name) {
  if (!m.allFinite()) throw RangeError(std::string(name) + ": entries must be finite");
  if (std::abs(m(0, 1) - m(1, 0)) > kSymTol)
    throw ShapeError(std::string(name) + ": matrix not symmetric");
  if (det2(m) < 0.25 - kDetClamp || m(0, 0) <= 0.0)
    throw RangeError(std::string(name) + ": matrix violates the uncertainty bound");
}

// det(cov) - 1/4, clamped to zero when rounding drags a pure state slightly
// negative; genuinely unphysical inputs are rejected before this point.
double purity_defect(const Eigen::Matrix2d& cov) {
  const double d = det2(cov) - 0.25;
  return (d > -kDetClamp && d < 0.0) ? 0.0 : d;
}

double fidelity_from_covs(const Eigen::Matrix2d& cov_a, const Eigen::Matrix2d& cov_b,
                          double quad_form, double* delta_out, double* det_sum_out) {
  const double delta = std::max(4.0 * purity_defect(cov_a) * purity_defect(cov_b), 0.0);
  const double det_sum = det2(cov_a + cov_b);
  const double denom = std::sqrt(det_sum + delta) - std::sqrt(delta);
  if (delta_out) *delta_out = delta;
  if (det_sum_out) *det_sum_out = det_sum;
  return std::exp(-0.5 * quad_form) / denom;
}

}  // namespace

FidelityReport gaussian_fidelity(const GaussianState& a, const GaussianState& b) {
  if (a.n_modes() != 1 || b.n_modes() != 1)
    throw DimensionError("gaussian_fidelity: states must be single-mode");

  const Eigen::Matrix2d sum = a.cov() + b.cov();
  const double det = det2(sum);
  if (!(std::abs(det) > 1e-300))
    throw SingularMatrixError("gaussian_fidelity: covariance sum is singular");
  Eigen::Matrix2d inv;
  inv << sum(1, 1), -sum(0, 1), -sum(1, 0), sum(0, 0);
  inv /= det;

  const Eigen::Vector2d dx = a.mean() - b.mean();
  FidelityReport report{};
  report.fidelity = fidelity_from_covs(a.cov(), b.cov(), dx.dot(inv * dx),
                                       &report.delta, &report.det_sum);
  return report;
}

double symmetric_cloning_fidelity(const Eigen::Matrix2d& sigma_k,
                                  const Eigen::Matrix2d& sigma_3,
                                  const Eigen::Matrix2d& sigma_m) {
  check_cov_2x2(sigma_k, "symmetric_cloning_fidelity: sigma_k");
  check_cov_2x2(sigma_3, "symmetric_cloning_fidelity: sigma_3");
  check_cov_2x2(sigma_m, "symmetric_cloning_fidelity: sigma_m");

  const Eigen::Matrix2d clone_cov = sigma_k + 0.5 * (sigma_3 + sigma_m);
  return fidelity_from_covs(sigma_k, clone_cov, 0.0, nullptr, nullptr);
}

double optimal_ancilla_squeezing(const Eigen::Matrix2d& sigma_k,
                                 const Eigen::Matrix2d& sigma_m) {
  check_cov_2x2(sigma_k, "optimal_ancilla_squeezing: sigma_k");
  check_cov_2x2(sigma_m, "optimal_ancilla_squeezing: sigma_m");
  if (std::abs(sigma_k(0, 1)) > 1e-12 || std::abs(sigma_m(0, 1)) > 1e-12)
    throw ShapeError("optimal_ancilla_squeezing: covariances must be diagonal");

  return 0.25 * std::log((4.0 * sigma_k(0, 0) + sigma_m(0, 0)) /
                         (4.0 * sigma_k(1, 1) + sigma_m(1, 1)));
}

AncillaOptimum maximize_fidelity_numeric(const Eigen::Matrix2d& sigma_k,
                                         const Eigen::Matrix2d& sigma_m) {
  const auto fidelity_at = [&](double n_th, double s) {
    return symmetric_cloning_fidelity(sigma_k, squeezed_thermal(n_th, s).cov(), sigma_m);
  };

  // Coarse bracket over s, then golden-section refinement.
  const double lo = -3.0, hi = 3.0;
  const int coarse = 121;
  double best_s = lo;
  double best_f = -1.0;
  for (int i = 0; i < coarse; ++i) {
    const double s = lo + (hi - lo) * i / (coarse - 1);
    const double f = fidelity_at(0.0, s);
    if (f > best_f) {
      best_f = f;
      best_s = s;
    }
  }
  const double step = (hi - lo) / (coarse - 1);
  double a = best_s - step, b = best_s + step;
  const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - golden * (b - a);
  double x2 = a + golden * (b - a);
  double f1 = fidelity_at(0.0, x1);
  double f2 = fidelity_at(0.0, x2);
  while (b - a > 1e-12) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + golden * (b - a);
      f2 = fidelity_at(0.0, x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - golden * (b - a);
      f1 = fidelity_at(0.0, x1);
    }
  }

  AncillaOptimum opt{};
  opt.s_star = 0.5 * (a + b);
  opt.f_star = fidelity_at(0.0, opt.s_star);

  // Thermal-photon grid scan over [0, 2]: extra ancilla noise never helps.
  opt.n_th_argmax = 0.0;
  double best_thermal = -1.0;
  for (int i = 0; i <= 20; ++i) {
    const double n_th = 0.1 * i;
    double best_over_s = -1.0;
    for (int j = 0; j < coarse; ++j) {
      const double s = lo + (hi - lo) * j / (coarse - 1);
      best_over_s = std::max(best_over_s, fidelity_at(n_th, s));
    }
    if (best_over_s > best_thermal + 1e-12) {
      best_thermal = best_over_s;
      opt.n_th_argmax = n_th;
    }
  }
  return opt;
}

double enhancement(double r, double eta) {
  if (!(std::abs(r) <= 3.0)) throw RangeError("enhancement: |r| must be <= 3");
  if (!(eta > 0.0 && eta <= 1.0)) throw RangeError("enhancement: eta must lie in (0, 1]");
  const Eigen::Matrix2d sigma_k = squeezed_coherent(0.0, r).cov();
  const Eigen::Matrix2d sigma_m = GaussianMeasurement::heterodyne(eta).cov();
  const double s_bar = optimal_ancilla_squeezing(sigma_k, sigma_m);
  const double f_opt =
      symmetric_cloning_fidelity(sigma_k, squeezed_thermal(0.0, s_bar).cov(), sigma_m);
  const double f_vac = symmetric_cloning_fidelity(sigma_k, vacuum().cov(), sigma_m);
  return (f_opt - f_vac) / f_vac;
}

}  // namespace gaussclone
