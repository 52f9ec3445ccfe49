#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <vector>

#include "tcfwm/pulses.hpp"
#include "tcfwm/superoperator.hpp"

namespace tcfwm {

// Brute-force reference path: direct time integration of the master
// equation. Deliberately independent of the eigendecomposition route in
// response.hpp; allowed to be slow.

struct OdeConfig {
  enum class Method { kAdaptiveRk45, kFixedRk4 };
  Method method = Method::kAdaptiveRk45;
  double rel_tol = 1e-10;
  double abs_tol = 1e-13;
  double max_step = 0.05;    // ps
  double fixed_step = 0.01;  // ps, fixed RK4 only

  void validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
      throw ConfigError("ode: tolerances must be positive");
    if (!(max_step > 0.0) || !(fixed_step > 0.0))
      throw ConfigError("ode: steps must be positive");
  }
};

namespace detail {

// Dormand-Prince 5(4) embedded pair on a flattened density matrix.
template <typename Rhs>
void dopri_advance(const Rhs& rhs, VectorXcd& y, double t0, double t1,
                   const OdeConfig& cfg) {
  static constexpr std::array<double, 7> kC = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5,
                                               8.0 / 9, 1.0, 1.0};
  static constexpr double kA[7][6] = {
      {},
      {1.0 / 5},
      {3.0 / 40, 9.0 / 40},
      {44.0 / 45, -56.0 / 15, 32.0 / 9},
      {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
      {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
      {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
  static constexpr std::array<double, 7> kB5 = {35.0 / 384,     0.0,
                                                500.0 / 1113,   125.0 / 192,
                                                -2187.0 / 6784, 11.0 / 84,
                                                0.0};
  static constexpr std::array<double, 7> kB4 = {
      5179.0 / 57600, 0.0,           7571.0 / 16695, 393.0 / 640,
      -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

  if (t1 <= t0) return;
  const double done_tol = 1e-12 * std::max(1.0, std::abs(t1));
  double t = t0;
  double h = std::min(cfg.max_step, t1 - t0);
  std::array<VectorXcd, 7> k;
  while (t1 - t > done_tol) {
    h = std::min(h, t1 - t);
    if (h < 1e-12 * cfg.max_step)
      throw NumericalError("ode: step size underflow at t=" + std::to_string(t));
    k[0] = rhs(y);
    for (int s = 1; s < 7; ++s) {
      VectorXcd ys = y;
      for (int p = 0; p < s; ++p)
        if (kA[s][p] != 0.0) ys += (h * kA[s][p]) * k[static_cast<std::size_t>(p)];
      k[static_cast<std::size_t>(s)] = rhs(ys);
    }
    VectorXcd y5 = y;
    VectorXcd y4 = y;
    for (int s = 0; s < 7; ++s) {
      if (kB5[static_cast<std::size_t>(s)] != 0.0)
        y5 += (h * kB5[static_cast<std::size_t>(s)]) * k[static_cast<std::size_t>(s)];
      if (kB4[static_cast<std::size_t>(s)] != 0.0)
        y4 += (h * kB4[static_cast<std::size_t>(s)]) * k[static_cast<std::size_t>(s)];
    }
    double err = 0.0;
    for (int i = 0; i < y.size(); ++i) {
      const double scale =
          cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y(i)), std::abs(y5(i)));
      err = std::max(err, std::abs(y5(i) - y4(i)) / scale);
    }
    if (err <= 1.0) {
      t += h;
      y = y5;
    }
    const double factor =
        err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
    h = std::min(cfg.max_step, h * std::clamp(factor, 0.2, 5.0));
  }
}

template <typename Rhs>
void rk4_advance(const Rhs& rhs, VectorXcd& y, double t0, double t1,
                 const OdeConfig& cfg) {
  if (t1 <= t0) return;
  const double span = t1 - t0;
  const int steps = std::max(1, static_cast<int>(std::ceil(span / cfg.fixed_step)));
  const double h = span / steps;
  for (int s = 0; s < steps; ++s) {
    const VectorXcd k1 = rhs(y);
    const VectorXcd k2 = rhs(y + (0.5 * h) * k1);
    const VectorXcd k3 = rhs(y + (0.5 * h) * k2);
    const VectorXcd k4 = rhs(y + h * k3);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
}

template <typename Rhs>
void ode_advance(const Rhs& rhs, VectorXcd& y, double t0, double t1,
                 const OdeConfig& cfg) {
  if (cfg.method == OdeConfig::Method::kFixedRk4)
    rk4_advance(rhs, y, t0, t1, cfg);
  else
    dopri_advance(rhs, y, t0, t1, cfg);
}

}  // namespace detail

// Integrates drho/dt = -(i/hbar) L(rho) from t_points(0), sampling the
// trajectory at every requested time.
inline std::vector<MatrixXcd> evolve_density_matrix(const TunedParams& tuned,
                                                    const MatrixXcd& rho0,
                                                    const VectorXd& t_points,
                                                    const OdeConfig& cfg = {}) {
  cfg.validate();
  const LadderBasis basis = build_basis(tuned.n_emitters);
  if (rho0.rows() != basis.dim() || rho0.cols() != basis.dim())
    throw ConfigError("evolve_density_matrix: rho0 has wrong dimension");
  const LindbladGenerator gen(basis, tuned);
  const int d = basis.dim();
  auto rhs = [&](const VectorXcd& y) -> VectorXcd {
    const Eigen::Map<const MatrixXcd> rho(y.data(), d, d);
    const MatrixXcd img = (-kI / kHbar) * gen.apply(rho);
    return Eigen::Map<const VectorXcd>(img.data(), d * d);
  };
  VectorXcd y = Eigen::Map<const VectorXcd>(rho0.data(), d * d);
  std::vector<MatrixXcd> out;
  out.reserve(static_cast<std::size_t>(t_points.size()));
  double t = t_points(0);
  out.push_back(rho0);
  for (int i = 1; i < t_points.size(); ++i) {
    detail::ode_advance(rhs, y, t, t_points(i), cfg);
    t = t_points(i);
    out.push_back(Eigen::Map<const MatrixXcd>(y.data(), d, d));
  }
  return out;
}

// FWM polarization by brute force: pulse kicks at the exact pulse instants,
// master-equation integration in between, Tr(rho a) on the emission grid.
inline VectorXcd fwm_via_ode(const TunedParams& tuned, const PulseConfig& pulses,
                             const VectorXd& t_grid, double tau,
                             const OdeConfig& cfg = {}) {
  cfg.validate();
  const LadderBasis basis = build_basis(tuned.n_emitters);
  const LindbladGenerator gen(basis, tuned);
  const MatrixXcd& a = gen.annihilation();
  const int d = basis.dim();
  auto rhs = [&](const VectorXcd& y) -> VectorXcd {
    const Eigen::Map<const MatrixXcd> rho(y.data(), d, d);
    const MatrixXcd img = (-kI / kHbar) * gen.apply(rho);
    return Eigen::Map<const VectorXcd>(img.data(), d * d);
  };

  MatrixXcd rho = MatrixXcd::Zero(d, d);
  rho(0, 0) = 1.0;
  // Pulse commutators written out directly (independent of pulses.hpp).
  auto kick1 = [&](const MatrixXcd& r) -> MatrixXcd {
    return -kI * std::conj(pulses.area1) * (a * r - r * a);
  };
  auto kick2 = [&](const MatrixXcd& r) -> MatrixXcd {
    const MatrixXcd ad = a.adjoint();
    const MatrixXcd inner = ad * r - r * ad;
    return -0.5 * pulses.area2 * pulses.area2 * (ad * inner - inner * ad);
  };

  if (tau >= 0.0) {
    rho = kick1(rho);
    VectorXcd y = Eigen::Map<const VectorXcd>(rho.data(), d * d);
    detail::ode_advance(rhs, y, 0.0, tau, cfg);
    rho = Eigen::Map<const MatrixXcd>(y.data(), d, d);
    rho = kick2(rho);
  } else {
    rho = kick2(rho);
    VectorXcd y = Eigen::Map<const VectorXcd>(rho.data(), d * d);
    detail::ode_advance(rhs, y, 0.0, -tau, cfg);
    rho = Eigen::Map<const MatrixXcd>(y.data(), d, d);
    rho = kick1(rho);
  }

  VectorXcd y = Eigen::Map<const VectorXcd>(rho.data(), d * d);
  VectorXcd p(t_grid.size());
  double t = 0.0;
  for (int i = 0; i < t_grid.size(); ++i) {
    if (t_grid(i) < 0.0) throw ConfigError("fwm_via_ode: t must be >= 0");
    detail::ode_advance(rhs, y, t, t_grid(i), cfg);
    t = t_grid(i);
    const Eigen::Map<const MatrixXcd> rt(y.data(), d, d);
    p(i) = (rt * a).trace();
  }
  if (!pulses.include_prefactor) p /= kI * 0.5;
  return p;
}

// Characteristic-polynomial eigenvalues for matrices up to dimension 8:
// Faddeev-LeVerrier coefficients on a trace-shifted copy, Durand-Kerner
// root iteration, shift back. Independent of the dense eigensolver.
inline std::vector<Complex> charpoly_eigenvalues(const MatrixXcd& mat) {
  const int n = static_cast<int>(mat.rows());
  if (n != mat.cols()) throw ConfigError("charpoly_eigenvalues: matrix must be square");
  if (n > 8) throw ConfigError("charpoly_eigenvalues: dimension > 8 not supported");
  const Complex shift = mat.trace() / static_cast<double>(n);
  const MatrixXcd a = mat - shift * MatrixXcd::Identity(n, n);

  // p(x) = x^n + c[0] x^{n-1} + ... + c[n-1]
  std::vector<Complex> c(static_cast<std::size_t>(n));
  MatrixXcd m = MatrixXcd::Identity(n, n);
  for (int k = 1; k <= n; ++k) {
    m = a * m;
    const Complex ck = -m.trace() / static_cast<double>(k);
    c[static_cast<std::size_t>(k - 1)] = ck;
    m += ck * MatrixXcd::Identity(n, n);
  }

  auto eval = [&](Complex x) {
    Complex v = 1.0;
    for (int k = 0; k < n; ++k) v = v * x + c[static_cast<std::size_t>(k)];
    return v;
  };

  // Durand-Kerner from a non-symmetric circle of starting points.
  double radius = 1.0;
  for (int k = 0; k < n; ++k)
    radius = std::max(radius,
                      std::pow(std::abs(c[static_cast<std::size_t>(k)]), 1.0 / (k + 1)));
  std::vector<Complex> roots(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k)
    roots[static_cast<std::size_t>(k)] =
        radius * std::exp(Complex(0.0, 0.4 + 2.0 * M_PI * k / n));
  for (int iter = 0; iter < 1000; ++iter) {
    double moved = 0.0;
    for (int k = 0; k < n; ++k) {
      Complex denom = 1.0;
      for (int l = 0; l < n; ++l)
        if (l != k)
          denom *= roots[static_cast<std::size_t>(k)] - roots[static_cast<std::size_t>(l)];
      const Complex delta = eval(roots[static_cast<std::size_t>(k)]) / denom;
      roots[static_cast<std::size_t>(k)] -= delta;
      moved = std::max(moved, std::abs(delta));
    }
    if (moved < 1e-13 * std::max(radius, 1.0)) break;
  }
  for (auto& r : roots) r += shift;
  std::sort(roots.begin(), roots.end(), [](Complex x, Complex y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });
  return roots;
}

}  // namespace tcfwm
