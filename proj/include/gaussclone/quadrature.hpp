#pragma once

#include <Eigen/Dense>

namespace gaussclone {

// Gauss-Hermite rule for weight exp(-t^2) on the real line:
//   integral f(t) exp(-t^2) dt  ~=  sum_i weights[i] * f(nodes[i]).
// Nodes/weights via Golub-Welsch on the symmetric tridiagonal Jacobi matrix.
struct GaussHermiteRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

GaussHermiteRule gauss_hermite(int order);

}  // namespace gaussclone
