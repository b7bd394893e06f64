#include "gaussclone/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "gaussclone/errors.hpp"

namespace gaussclone {

GaussHermiteRule gauss_hermite(int order) {
  if (order < 1) throw RangeError("gauss_hermite: order must be >= 1");

  // Jacobi matrix of the (physicists') Hermite polynomials: zero diagonal,
  // off-diagonal beta_k = sqrt(k/2).
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(order, order);
  for (int k = 1; k < order; ++k) {
    const double beta = std::sqrt(0.5 * k);
    jacobi(k, k - 1) = beta;
    jacobi(k - 1, k) = beta;
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  GaussHermiteRule rule;
  rule.nodes = solver.eigenvalues();
  rule.weights.resize(order);
  const double mu0 = std::sqrt(std::numbers::pi);
  for (int i = 0; i < order; ++i) {
    const double v0 = solver.eigenvectors()(0, i);
    rule.weights[i] = mu0 * v0 * v0;
  }
  return rule;
}

}  // namespace gaussclone
