#pragma once

#include "corrkit/matalg.hpp"

namespace corrkit {

struct SimplexLeastSquaresResult {
  VectorXd weights;
  VectorXcd point;  // Σ w_j z_j
  double residual = 0.0;  // ‖point − target‖
  double gap = 0.0;       // final Frank-Wolfe duality gap
  int iterations = 0;
  bool converged = false;
};

/// min ‖Z w − target‖ over the probability simplex, by Frank-Wolfe with away
/// steps and exact line search. Stops when the duality gap ≤ gap_tol·scale,
/// scale = max(1, ‖target‖², max_j ‖z_j‖²).
SimplexLeastSquaresResult simplex_least_squares(const MatrixXcd& Z, const VectorXcd& target,
                                                double gap_tol = 1e-10, int max_iters = 20000);

}  // namespace corrkit
