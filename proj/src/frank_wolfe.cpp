#include "corrkit/frank_wolfe.hpp"

#include <algorithm>
#include <limits>

namespace corrkit {

SimplexLeastSquaresResult simplex_least_squares(const MatrixXcd& Z, const VectorXcd& target,
                                                double gap_tol, int max_iters) {
  const Index m = Z.cols();
  if (m == 0) throw DomainError("simplex_least_squares: no points");
  if (Z.rows() != target.size()) throw StructuralError("simplex_least_squares: size mismatch");

  // f(w) = ‖Zw − t‖²; the gradient is 2 Re(Z*(Zw − t)) and Re(Z*Z) is the Hessian / 2.
  const MatrixXd gram = (Z.adjoint() * Z).real();
  const VectorXd lin = (Z.adjoint() * target).real();

  double scale = std::max(1.0, target.squaredNorm());
  for (Index j = 0; j < m; ++j) scale = std::max(scale, gram(j, j));
  const double tol = gap_tol * scale;

  // Start at the vertex closest to the target.
  Index start = 0;
  double best = std::numeric_limits<double>::infinity();
  for (Index j = 0; j < m; ++j) {
    const double f = gram(j, j) - 2.0 * lin(j);
    if (f < best) {
      best = f;
      start = j;
    }
  }
  VectorXd w = VectorXd::Zero(m);
  w(start) = 1.0;
  VectorXd gw = gram.col(start);  // gram · w

  SimplexLeastSquaresResult res;
  for (int it = 0; it < max_iters; ++it) {
    const VectorXd grad = 2.0 * (gw - lin);
    Index s = 0;
    grad.minCoeff(&s);
    Index v = -1;
    double vmax = -std::numeric_limits<double>::infinity();
    for (Index j = 0; j < m; ++j) {
      if (w(j) > 0.0 && grad(j) > vmax) {
        vmax = grad(j);
        v = j;
      }
    }
    const double gw_dot = grad.dot(w);
    const double fw_gap = gw_dot - grad(s);
    res.gap = fw_gap;
    res.iterations = it;
    if (fw_gap <= tol) {
      res.converged = true;
      break;
    }
    const double away_gap = vmax - gw_dot;

    // Direction d = e_s − w (toward) or w − e_v (away).
    double max_step;
    bool toward = fw_gap >= away_gap;
    double dir_grad;
    if (toward) {
      dir_grad = grad(s) - gw_dot;
      max_step = 1.0;
    } else {
      dir_grad = gw_dot - grad(v);
      const double wv = w(v);
      max_step = wv < 1.0 ? wv / (1.0 - wv) : std::numeric_limits<double>::infinity();
    }
    double curv;  // d·gram·d
    if (toward) {
      curv = gram(s, s) - 2.0 * gw(s) + w.dot(gw);
    } else {
      curv = w.dot(gw) - 2.0 * gw(v) + gram(v, v);
    }
    double step = curv > 0.0 ? -dir_grad / (2.0 * curv) : max_step;
    step = std::clamp(step, 0.0, max_step);
    if (step <= 0.0) break;

    if (toward) {
      w *= (1.0 - step);
      w(s) += step;
      gw = (1.0 - step) * gw + step * gram.col(s);
    } else {
      w *= (1.0 + step);
      w(v) -= step;
      gw = (1.0 + step) * gw - step * gram.col(v);
      if (w(v) < 1e-15) w(v) = 0.0;
    }
  }
  w = w.cwiseMax(0.0);
  w /= w.sum();
  res.weights = w;
  res.point = Z * w.cast<cd>();
  res.residual = (res.point - target).norm();
  return res;
}

}  // namespace corrkit
