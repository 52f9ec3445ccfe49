#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "tcfwm/response.hpp"

namespace tcfwm {

namespace detail {

inline double uniform_step(const VectorXd& grid, const char* name) {
  check_grid(grid, name);
  if (grid.size() < 2)
    throw ConfigError(std::string(name) + " grid needs at least 2 points for an FT");
  const double h = (grid(grid.size() - 1) - grid(0)) / (grid.size() - 1);
  for (int i = 1; i < grid.size(); ++i)
    if (std::abs(grid(i) - grid(i - 1) - h) > 1e-9 * std::max(1.0, std::abs(h)))
      throw ConfigError(std::string(name) + " grid must be uniform");
  return h;
}

}  // namespace detail

// Sampled spectrum vs delay. The omega axis is absolute; because the
// underlying time samples are kept in the ref_energy rotating frame, the
// transform kernel uses omega - ref_energy.
struct SpectralMap {
  VectorXd omega_grid;  // mueV, absolute
  VectorXd tau_grid;    // ps
  Eigen::MatrixXcd values;  // omega x tau
  double ref_energy = 0.0;
  bool phase_corrected = false;
  double omega_cor = 0.0;  // recorded correction frequency (grid-snapped)
  std::vector<int> skipped_columns;  // tau columns with undefined arg at omega_cor
};

// Discrete approximation of P~(omega,tau) = integral_0^inf P(t,tau)
// e^{i(omega)t/hbar} dt with trapezoidal end weights; a gamma_s > 0 damps
// the integrand by e^{-gamma_s t/hbar}, reproducing the Lorentzian
// spectrometer broadening of the closed form.
inline SpectralMap ft_time_to_omega(const FwmSignal& signal, const VectorXd& omega_grid,
                                    double gamma_s = 0.0) {
  const double dt = detail::uniform_step(signal.t_grid, "t");
  detail::check_grid(omega_grid, "omega");
  if (gamma_s < 0.0) throw ConfigError("ft_time_to_omega: gamma_s must be >= 0");
  const int nt = static_cast<int>(signal.t_grid.size());

  SpectralMap map;
  map.omega_grid = omega_grid;
  map.tau_grid = signal.tau_grid;
  map.ref_energy = signal.ref_energy;
  map.values.resize(omega_grid.size(), signal.tau_grid.size());

  MatrixXcd kernel(omega_grid.size(), nt);
  for (int i = 0; i < omega_grid.size(); ++i) {
    const double w = omega_grid(i) - signal.ref_energy;
    for (int k = 0; k < nt; ++k) {
      const double weight = (k == 0 || k == nt - 1) ? 0.5 : 1.0;
      kernel(i, k) = weight * dt *
                     std::exp(Complex(-gamma_s, w) * (signal.t_grid(k) / kHbar));
    }
  }
  detail::parallel_columns(static_cast<int>(signal.tau_grid.size()), [&](int c) {
    map.values.col(c) = kernel * signal.values.col(c);
  });
  return map;
}

// P~_cor(omega,tau) = P~(omega,tau)*exp(i((omega_cor)tau/hbar - arg
// P~(omega_cor,tau))); with in-frame data the linear ramp uses
// omega_cor - ref_energy so the corrected phase matches the closed form.
// omega_cor snaps to the nearest grid point. Columns whose amplitude at
// omega_cor vanishes are passed through unchanged and recorded.
inline SpectralMap phase_correct(const SpectralMap& map, double omega_cor) {
  if (map.omega_grid.size() == 0) throw ConfigError("phase_correct: empty map");
  if (omega_cor < map.omega_grid(0) ||
      omega_cor > map.omega_grid(map.omega_grid.size() - 1))
    throw ConfigError("phase_correct: omega_cor outside omega grid");
  int idx = 0;
  for (int i = 1; i < map.omega_grid.size(); ++i)
    if (std::abs(map.omega_grid(i) - omega_cor) <
        std::abs(map.omega_grid(idx) - omega_cor))
      idx = i;

  SpectralMap out = map;
  out.phase_corrected = true;
  out.omega_cor = map.omega_grid(idx);
  out.skipped_columns.clear();
  const double ramp = (out.omega_cor - map.ref_energy) / kHbar;
  for (int c = 0; c < map.tau_grid.size(); ++c) {
    const Complex pivot = map.values(idx, c);
    if (std::abs(pivot) == 0.0) {
      out.skipped_columns.push_back(c);
      continue;
    }
    const Complex factor =
        std::exp(kI * (ramp * map.tau_grid(c) - std::arg(pivot)));
    out.values.col(c) *= factor;
  }
  return out;
}

// Discrete FT over delay. With positive_only (the default) only tau >= 0
// samples enter, matching the closed-form 2D route. The kernel
// e^{i(ref - omega_tau)tau/hbar} carries both the frame shift and the
// omega_tau axis flip, so first-rung peaks land at omega_tau = +Re lambda1.
// Evaluating directly on the requested omega_tau grid is equivalent to
// zero-padding the sample record before an FFT.
inline Fwm2D ft_tau_to_omega_tau(const SpectralMap& map, const VectorXd& omega_tau_grid,
                                 bool positive_only = true) {
  detail::check_grid(omega_tau_grid, "omega_tau");
  std::vector<int> cols;
  for (int c = 0; c < map.tau_grid.size(); ++c)
    if (!positive_only || map.tau_grid(c) >= 0.0) cols.push_back(c);
  if (cols.size() < 2)
    throw ConfigError("ft_tau_to_omega_tau: need at least 2 delay samples");
  VectorXd taus(static_cast<int>(cols.size()));
  for (std::size_t i = 0; i < cols.size(); ++i)
    taus(static_cast<int>(i)) = map.tau_grid(cols[i]);
  const double dtau = detail::uniform_step(taus, "tau");
  const int nk = static_cast<int>(cols.size());

  Fwm2D out;
  out.omega_grid = map.omega_grid;
  out.omega_tau_grid = omega_tau_grid;
  out.survival_time = 0.0;
  out.omega_tau_flipped = true;
  out.phase_corrected = map.phase_corrected;
  out.values.resize(map.omega_grid.size(), omega_tau_grid.size());

  detail::parallel_columns(static_cast<int>(omega_tau_grid.size()), [&](int c) {
    const double u = omega_tau_grid(c);
    VectorXcd kernel(nk);
    for (int k = 0; k < nk; ++k) {
      const double weight = (k == 0 || k == nk - 1) ? 0.5 : 1.0;
      kernel(k) = weight * dtau *
                  std::exp(kI * (map.ref_energy - u) * (taus(k) / kHbar));
    }
    VectorXcd acc = VectorXcd::Zero(map.omega_grid.size());
    for (int k = 0; k < nk; ++k) acc += kernel(k) * map.values.col(cols[static_cast<std::size_t>(k)]);
    out.values.col(c) = acc;
  });
  return out;
}

// Zeroes all samples emitted before the survival time t_s.
inline FwmSignal post_select(const FwmSignal& signal, double t_s) {
  if (t_s < 0.0) throw ConfigError("post_select: t_s must be >= 0");
  if (signal.t_grid.size() == 0 || t_s > signal.t_grid(signal.t_grid.size() - 1))
    throw ConfigError("post_select: t_s beyond the sampled grid");
  FwmSignal out = signal;
  out.survival_time = t_s;
  for (int i = 0; i < signal.t_grid.size(); ++i)
    if (signal.t_grid(i) < t_s) out.values.row(i).setZero();
  return out;
}

// |.|^2 of any complex map.
inline MatrixXd power_map(const Eigen::MatrixXcd& values) {
  return values.cwiseAbs2();
}

// log10 of |.|^2 normalized to its maximum, clamped to a dynamic range of
// `decades` orders of magnitude (figures use a logarithmic colour scale).
inline MatrixXd log_power_map(const Eigen::MatrixXcd& values, double decades = 4.0) {
  if (!(decades > 0.0)) throw ConfigError("log_power_map: decades must be > 0");
  MatrixXd power = values.cwiseAbs2();
  const double peak = power.maxCoeff();
  if (peak <= 0.0) return MatrixXd::Constant(power.rows(), power.cols(), -decades);
  const double floor_val = peak * std::pow(10.0, -decades);
  return power.cwiseMax(floor_val).array().log10() - std::log10(peak);
}

}  // namespace tcfwm
