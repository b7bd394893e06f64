#pragma once

#include <cstdint>
#include <vector>

#include "gaussclone/gaussian_state.hpp"

namespace gaussclone {

// Binary phase-keyed communication read out by inefficient homodyne
// detection of one clone: the sender encodes k in the feed-forward gain
// g = +-1 of the symmetric machine, the receiver thresholds the measured x
// quadrature (x >= threshold means k = 1) on the raw, unflipped clone.

struct HomodyneDetector {
  double epsilon;          // quantum efficiency in (0, 1]
  double threshold = 0.0;  // decision threshold on x
};

struct XMarginal {
  double mean;
  double variance;
};

// Distribution of the x outcome of a homodyne detector with efficiency
// epsilon on a single-mode state: variance grows by (1 - eps)/(4 eps).
XMarginal homodyne_x_marginal(const GaussianState& state, double epsilon);

// Error probability at a fixed measurement outcome (equiprobable hypotheses):
//   (1/2) [ P(x < threshold | clone_plus) + P(x >= threshold | clone_minus) ].
double error_prob_given_z(const GaussianState& clone_plus,
                          const GaussianState& clone_minus, const HomodyneDetector& det);

enum class EstimateMethod { quadrature, monte_carlo };

struct CommEstimate {
  double value;
  double abs_error;  // quadrature: order-comparison bound; MC: standard error
  EstimateMethod method;
  std::int64_t n_evals;
};

inline constexpr std::uint64_t kDefaultSeed = 0xC10E5EEDULL;

// Average error probability of the protocol at amplitude alpha, heterodyne
// efficiency eta, homodyne efficiency epsilon; the expectation over the
// service provider's outcome z is taken by tensor Gauss-Hermite quadrature
// or plain Monte Carlo. budget = 0 picks the method default (order 40 /
// 1e5 samples); below the method minimum BudgetError is thrown.
CommEstimate average_error_probability(double alpha, double eta, double epsilon,
                                       EstimateMethod method, std::int64_t budget = 0,
                                       std::uint64_t seed = kDefaultSeed);

struct ErrorCurvePoint {
  double alpha;
  double h_e;
  double abs_error;
};

// Curve over a strictly increasing alpha grid. Points are independent and
// run on a worker pool (threads = 0 means default_thread_count()); each
// point derives its own seed from (seed, index) so results do not depend on
// the thread count.
std::vector<ErrorCurvePoint> error_curve(const std::vector<double>& alphas, double eta,
                                         double epsilon, EstimateMethod method,
                                         std::int64_t budget = 0,
                                         std::uint64_t seed = kDefaultSeed,
                                         int threads = 0);

}  // namespace gaussclone
