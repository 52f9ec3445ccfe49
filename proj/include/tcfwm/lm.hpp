#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>

#include "tcfwm/common.hpp"

namespace tcfwm {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Damped least squares with numeric Jacobians. The residual callback maps a
// parameter vector to a residual vector; the objective 0.5*|r|^2 is
// non-increasing across accepted steps by construction.
struct LmOptions {
  int max_iterations = 200;
  double step_rel = 1e-4;  // finite-difference step, relative to parameter scale
  double lambda0 = 1e-3;
  double gradient_tol = 1e-10;
  double step_tol = 1e-12;
  // Per-parameter scale for the finite-difference step; empty means
  // max(1, |x_p|). Set explicitly when a parameter's magnitude (e.g. an
  // absolute energy) dwarfs the scale on which the residual varies.
  VectorXd scales;
};

struct LmResult {
  VectorXd parameters;
  double residual_norm = 0.0;  // |r| at the solution
  int iterations = 0;
  bool converged = false;
  MatrixXd covariance;  // sigma^2 (J^T J)^-1, for parameter uncertainties
};

inline LmResult levenberg_marquardt(
    const std::function<VectorXd(const VectorXd&)>& residual, VectorXd x,
    const LmOptions& opt = {}) {
  VectorXd r = residual(x);
  double cost = 0.5 * r.squaredNorm();
  double lambda = opt.lambda0;
  const int n = static_cast<int>(x.size());

  LmResult result;
  MatrixXd jtj_last = MatrixXd::Identity(n, n);
  for (int iter = 0; iter < opt.max_iterations; ++iter) {
    result.iterations = iter + 1;
    MatrixXd jac(r.size(), n);
    for (int p = 0; p < n; ++p) {
      const double scale = opt.scales.size() == n ? opt.scales(p)
                                                  : std::max(1.0, std::abs(x(p)));
      const double h = opt.step_rel * scale;
      VectorXd xp = x;
      xp(p) += h;
      jac.col(p) = (residual(xp) - r) / h;
    }
    const MatrixXd jtj = jac.transpose() * jac;
    const VectorXd grad = jac.transpose() * r;
    jtj_last = jtj;
    if (grad.lpNorm<Eigen::Infinity>() < opt.gradient_tol) {
      result.converged = true;
      break;
    }
    bool accepted = false;
    for (int attempt = 0; attempt < 30; ++attempt) {
      MatrixXd damped = jtj;
      damped.diagonal() += lambda * jtj.diagonal().cwiseMax(1e-12);
      const VectorXd step = damped.ldlt().solve(-grad);
      const VectorXd x_new = x + step;
      const VectorXd r_new = residual(x_new);
      const double cost_new = 0.5 * r_new.squaredNorm();
      if (std::isfinite(cost_new) && cost_new < cost) {
        if (step.norm() < opt.step_tol * (x.norm() + opt.step_tol))
          result.converged = true;
        x = x_new;
        r = r_new;
        if (std::abs(cost - cost_new) < 1e-14 * (cost + 1e-300))
          result.converged = true;
        cost = cost_new;
        lambda = std::max(lambda * 0.3, 1e-12);
        accepted = true;
        break;
      }
      lambda *= 10.0;
    }
    if (!accepted) result.converged = true;  // no descent step: at a minimum
    if (!accepted || result.converged) break;
  }

  result.parameters = x;
  result.residual_norm = r.norm();
  const int dof = std::max<int>(1, static_cast<int>(r.size()) - n);
  const double sigma2 = r.squaredNorm() / dof;
  Eigen::FullPivLU<MatrixXd> lu(jtj_last);
  result.covariance = lu.isInvertible()
                          ? MatrixXd(sigma2 * lu.inverse())
                          : MatrixXd::Constant(n, n,
                                               std::numeric_limits<double>::quiet_NaN());
  return result;
}

}  // namespace tcfwm
