#include "gaussclone/cloner.hpp"

#include <cmath>
#include <utility>

namespace gaussclone {

namespace {

void check_single_mode_inputs(const GaussianState& rho1, const GaussianState& rho2,
                              const char* where) {
  if (rho1.n_modes() != 1 || rho2.n_modes() != 1)
    throw DimensionError(std::string(where) + ": inputs must be single-mode states");
}

}  // namespace

ClonerConfig::ClonerConfig(double tau1_in, double tau2_in, double gain_in,
                           GaussianMeasurement meas_in, GaussianState ancilla_in)
    : tau1(tau1_in),
      tau2(tau2_in),
      gain(gain_in),
      meas(std::move(meas_in)),
      ancilla(std::move(ancilla_in)) {
  if (!(tau1 >= kMinTransmissivity && tau1 <= 1.0 - kMinTransmissivity))
    throw RangeError("ClonerConfig: tau1 must lie in [1e-6, 1 - 1e-6]");
  if (!(tau2 >= kMinTransmissivity && tau2 <= 1.0 - kMinTransmissivity))
    throw RangeError("ClonerConfig: tau2 must lie in [1e-6, 1 - 1e-6]");
  if (!std::isfinite(gain)) throw RangeError("ClonerConfig: gain must be finite");
  if (ancilla.n_modes() != 1)
    throw DimensionError("ClonerConfig: ancilla must be a single-mode state");
}

double ClonerConfig::f1() const { return std::sqrt(tau1) + gain * std::sqrt(1.0 - tau1); }

double ClonerConfig::f2() const { return gain * std::sqrt(tau1) - std::sqrt(1.0 - tau1); }

CloneResult run_averaged(const GaussianState& rho1, const GaussianState& rho2,
                         const ClonerConfig& cfg) {
  check_single_mode_inputs(rho1, rho2, "run_averaged");

  const GaussianState mixed =
      apply_symplectic(tensor(rho1, rho2), bs_symplectic(cfg.tau1, 2, {0, 1}));
  const GaussianState fed = average_feedforward(mixed, cfg.meas, cfg.gain);
  const GaussianState split =
      apply_symplectic(tensor(fed, cfg.ancilla), bs_symplectic(cfg.tau2, 2, {0, 1}));
  return CloneResult{partial_trace(split, {0}), partial_trace(split, {1}), cfg.f1(),
                     cfg.f2()};
}

CloneMoments clone_moments_closed_form(const Eigen::Matrix2d& sigma1,
                                       const Eigen::Matrix2d& sigma2,
                                       const Eigen::Matrix2d& sigma3,
                                       const Eigen::Vector2d& x1, const Eigen::Vector2d& x2,
                                       const Eigen::Vector2d& x3, const ClonerConfig& cfg) {
  const double f1 = cfg.f1();
  const double f2 = cfg.f2();
  const double g2 = cfg.gain * cfg.gain;
  const double t2 = cfg.tau2;

  const Eigen::Matrix2d fed =
      f1 * f1 * sigma1 + f2 * f2 * sigma2 + g2 * cfg.meas.cov();
  const Eigen::Vector2d fed_mean = f1 * x1 + f2 * x2;

  CloneMoments out;
  out.cov1 = t2 * fed + (1.0 - t2) * sigma3;
  out.cov2 = (1.0 - t2) * fed + t2 * sigma3;
  out.mean1 = std::sqrt(t2) * fed_mean - std::sqrt(1.0 - t2) * x3;
  out.mean2 = std::sqrt(1.0 - t2) * fed_mean + std::sqrt(t2) * x3;
  return out;
}

SingleShot run_single_shot(const GaussianState& rho1, const GaussianState& rho2,
                           const ClonerConfig& cfg, std::complex<double> z) {
  check_single_mode_inputs(rho1, rho2, "run_single_shot");

  const GaussianState mixed =
      apply_symplectic(tensor(rho1, rho2), bs_symplectic(cfg.tau1, 2, {0, 1}));
  const Conditioned cond = measure_mode(mixed, 1, cfg.meas, z);
  const GaussianState displaced = displace(cond.state, 0, z, cfg.gain);
  const GaussianState split = apply_symplectic(tensor(displaced, cfg.ancilla),
                                               bs_symplectic(cfg.tau2, 2, {0, 1}));
  return SingleShot{CloneResult{partial_trace(split, {0}), partial_trace(split, {1}),
                                cfg.f1(), cfg.f2()},
                    cond.density};
}

double gain_select(CloneTarget target, double tau1) {
  if (!(tau1 >= kMinTransmissivity && tau1 <= 1.0 - kMinTransmissivity))
    throw RangeError("gain_select: tau1 must lie in [1e-6, 1 - 1e-6]");
  if (target == CloneTarget::input1) return std::sqrt((1.0 - tau1) / tau1);
  return -std::sqrt(tau1 / (1.0 - tau1));
}

GaussianState phase_flip(const GaussianState& state) {
  return GaussianState(-state.mean(), state.cov());
}

}  // namespace gaussclone
