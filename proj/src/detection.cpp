#include "gaussclone/detection.hpp"

#include <cmath>
#include <numbers>

#include "gaussclone/cloner.hpp"
#include "gaussclone/parallel.hpp"
#include "gaussclone/quadrature.hpp"

namespace gaussclone {

namespace {

constexpr int kQuadDefaultOrder = 40;
constexpr int kQuadMaxOrder = 200;
constexpr std::int64_t kQuadMinBudget = 1600;  // order-40 floor
constexpr std::int64_t kMcDefaultBudget = 100000;
constexpr std::int64_t kMcMinBudget = 100;

double normal_cdf(double t) { return 0.5 * std::erfc(-t / std::numbers::sqrt2); }

void check_efficiency(double value, const char* name) {
  if (!(value > 0.0 && value <= 1.0))
    throw RangeError(std::string(name) + " must lie in (0, 1]");
}

// The fixed protocol behind fig4/fig5: balanced machine, vacuum ancilla,
// sender's bit in the sign of the feed-forward gain.
struct Protocol {
  GaussianState rho;     // the coherent input, used for both ports
  GaussianState mixed;   // after the first beam splitter
  ClonerConfig plus;
  ClonerConfig minus;
  HomodyneDetector det;

  Protocol(double alpha, double eta, double epsilon)
      : rho(coherent(alpha)),
        mixed(apply_symplectic(tensor(rho, rho), bs_symplectic(0.5, 2, {0, 1}))),
        plus(0.5, 0.5, 1.0, GaussianMeasurement::heterodyne(eta), vacuum()),
        minus(0.5, 0.5, -1.0, GaussianMeasurement::heterodyne(eta), vacuum()),
        det{epsilon, 0.0} {}

  double error_at(std::complex<double> z) const {
    const GaussianState clone_plus = run_single_shot(rho, rho, plus, z).clones.clone1;
    const GaussianState clone_minus = run_single_shot(rho, rho, minus, z).clones.clone1;
    return error_prob_given_z(clone_plus, clone_minus, det);
  }
};

double quad_pass(const Protocol& proto, int order) {
  const GaussHermiteRule rule = gauss_hermite(order);

  // Outcome distribution in z coordinates: mean X_2 / sqrt(2), cov Sigma / 2.
  const Eigen::Vector2d mean =
      proto.mixed.mean().segment<2>(2) / std::numbers::sqrt2;
  const Eigen::Matrix2d sigma =
      0.5 * (proto.mixed.cov().block<2, 2>(2, 2) + proto.plus.meas.cov());
  const double l11 = std::sqrt(sigma(0, 0));
  const double l21 = sigma(1, 0) / l11;
  const double l22 = std::sqrt(std::max(sigma(1, 1) - l21 * l21, 0.0));

  double total = 0.0;
  for (int i = 0; i < order; ++i) {
    const double ti = std::numbers::sqrt2 * rule.nodes[i];
    double row = 0.0;
    for (int j = 0; j < order; ++j) {
      const double tj = std::numbers::sqrt2 * rule.nodes[j];
      const std::complex<double> z(mean[0] + l11 * ti, mean[1] + l21 * ti + l22 * tj);
      row += rule.weights[j] * proto.error_at(z);
    }
    total += rule.weights[i] * row;
  }
  return total / std::numbers::pi;
}

}  // namespace

XMarginal homodyne_x_marginal(const GaussianState& state, double epsilon) {
  if (state.n_modes() != 1)
    throw DimensionError("homodyne_x_marginal: state must be single-mode");
  check_efficiency(epsilon, "homodyne_x_marginal: epsilon");
  return XMarginal{state.mean()[0],
                   state.cov()(0, 0) + (1.0 - epsilon) / (4.0 * epsilon)};
}

double error_prob_given_z(const GaussianState& clone_plus,
                          const GaussianState& clone_minus,
                          const HomodyneDetector& det) {
  if (!std::isfinite(det.threshold))
    throw RangeError("error_prob_given_z: threshold must be finite");
  const XMarginal plus = homodyne_x_marginal(clone_plus, det.epsilon);
  const XMarginal minus = homodyne_x_marginal(clone_minus, det.epsilon);
  const double miss = normal_cdf((det.threshold - plus.mean) / std::sqrt(plus.variance));
  const double alarm =
      1.0 - normal_cdf((det.threshold - minus.mean) / std::sqrt(minus.variance));
  return 0.5 * (miss + alarm);
}

CommEstimate average_error_probability(double alpha, double eta, double epsilon,
                                       EstimateMethod method, std::int64_t budget,
                                       std::uint64_t seed) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha))
    throw RangeError("average_error_probability: alpha must be >= 0");
  check_efficiency(eta, "average_error_probability: eta");
  check_efficiency(epsilon, "average_error_probability: epsilon");

  if (method == EstimateMethod::quadrature) {
    if (budget == 0) budget = kQuadMinBudget;
    if (budget < kQuadMinBudget)
      throw BudgetError("average_error_probability: quadrature needs budget >= 1600");
  } else {
    if (budget == 0) budget = kMcDefaultBudget;
    if (budget < kMcMinBudget)
      throw BudgetError("average_error_probability: monte_carlo needs budget >= 100");
  }

  CommEstimate estimate{};
  estimate.method = method;
  estimate.n_evals = 0;

  // Zero signal: the g = +1 and g = -1 clone pairs are exact mirror images,
  // so the outcome-averaged error probability is 1/2 identically.
  if (alpha == 0.0) {
    estimate.value = 0.5;
    estimate.abs_error = 0.0;
    return estimate;
  }

  const Protocol proto(alpha, eta, epsilon);

  if (method == EstimateMethod::quadrature) {
    const int order = std::min<std::int64_t>(
        kQuadMaxOrder, std::max<std::int64_t>(kQuadDefaultOrder,
                                              static_cast<std::int64_t>(
                                                  std::floor(std::sqrt(
                                                      static_cast<double>(budget))))));
    const int check_order = order - 8;
    const double value = quad_pass(proto, order);
    const double check = quad_pass(proto, check_order);
    estimate.value = value;
    estimate.abs_error = std::max(std::abs(value - check), 1e-14);
    estimate.n_evals = static_cast<std::int64_t>(order) * order +
                       static_cast<std::int64_t>(check_order) * check_order;
    return estimate;
  }

  RandomStream rng(seed);
  const GaussianMeasurement& meas = proto.plus.meas;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::int64_t i = 0; i < budget; ++i) {
    const std::complex<double> z = sample_outcome(proto.mixed, 1, meas, rng);
    const double h = proto.error_at(z);
    sum += h;
    sum_sq += h * h;
  }
  const double n = static_cast<double>(budget);
  estimate.value = sum / n;
  const double var = std::max(sum_sq / n - estimate.value * estimate.value, 0.0);
  estimate.abs_error = std::sqrt(var / n);
  estimate.n_evals = budget;
  return estimate;
}

std::vector<ErrorCurvePoint> error_curve(const std::vector<double>& alphas, double eta,
                                         double epsilon, EstimateMethod method,
                                         std::int64_t budget, std::uint64_t seed,
                                         int threads) {
  if (alphas.empty()) throw RangeError("error_curve: alpha grid must not be empty");
  for (std::size_t i = 0; i + 1 < alphas.size(); ++i)
    if (!(alphas[i] < alphas[i + 1]))
      throw RangeError("error_curve: alpha grid must be strictly increasing");

  std::vector<ErrorCurvePoint> points(alphas.size());
  if (threads == 0) threads = default_thread_count();
  parallel_for(alphas.size(), threads, [&](std::size_t i) {
    const CommEstimate est = average_error_probability(
        alphas[i], eta, epsilon, method, budget, RandomStream::derive_seed(seed, i));
    points[i] = ErrorCurvePoint{alphas[i], est.value, est.abs_error};
  });
  return points;
}

}  // namespace gaussclone
