#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "tcfwm/params.hpp"

namespace tcfwm {

using Eigen::VectorXd;

// Average cavity detuning delta = omega_c - (sum_n g_n omega_xn)/(sum_n g_n),
// the coupling-weighted exciton mean. Because the cavity shifts slower than
// the excitons (eta < 1), delta(T) is strictly increasing and invertible.
inline double average_detuning(const TunedParams& tuned) {
  double gsum = 0.0;
  double acc = 0.0;
  for (std::size_t n = 0; n < tuned.omega_x.size(); ++n) {
    gsum += tuned.g[n];
    acc += tuned.g[n] * tuned.omega_x[n];
  }
  if (!(gsum > 0.0))
    throw ConfigError("average_detuning: couplings must not all vanish");
  return tuned.omega_c - acc / gsum;
}

inline double average_detuning(const SystemParams& params, double temperature) {
  return average_detuning(tune(params, temperature));
}

// Inverts delta(T) = target by bisection to within tol (mueV). Searches
// [0, t_max]; throws if the target is outside the attainable range.
inline double temperature_for_detuning(const SystemParams& params, double target,
                                       double t_max = 300.0, double tol = 0.01) {
  params.validate();
  if (!(t_max > 0.0)) throw ConfigError("temperature_for_detuning: t_max must be > 0");
  double lo = 0.0;
  double hi = t_max;
  double f_lo = average_detuning(params, lo) - target;
  double f_hi = average_detuning(params, hi) - target;
  if (f_lo > 0.0 || f_hi < 0.0)
    throw ConfigError("temperature_for_detuning: target detuning not reachable in [0, t_max]");
  // Bisect until the detuning (not the temperature) is resolved to tol.
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = average_detuning(params, mid) - target;
    if (std::abs(f_mid) < tol && hi - lo < 1e-6 * t_max) return mid;
    if (f_mid < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

// Tuned systems on a temperature grid, for level-structure sweeps.
inline std::vector<TunedParams> detuning_sweep(const SystemParams& params,
                                               const VectorXd& temperatures) {
  std::vector<TunedParams> out;
  out.reserve(static_cast<std::size_t>(temperatures.size()));
  for (int i = 0; i < temperatures.size(); ++i)
    out.push_back(tune(params, temperatures(i)));
  return out;
}

}  // namespace tcfwm
