#pragma once

#include <cmath>
#include <vector>

#include "tcfwm/common.hpp"

namespace tcfwm {

// Band-gap temperature tuning: omega_x(T) = omega_x(0) + F(T),
// omega_c(T) = omega_c(0) + eta*F(T).
struct TemperatureModel {
  double alpha = 60.9;  // mueV/K
  double theta = 58.9;  // K
  double eta = 0.227;   // cavity shift scale, dimensionless

  void validate() const {
    if (!(alpha > 0.0)) throw ConfigError("temperature model: alpha must be > 0");
    if (!(theta > 0.0)) throw ConfigError("temperature model: theta must be > 0");
    if (!(eta >= 0.0 && eta <= 1.0))
      throw ConfigError("temperature model: eta must be in [0,1]");
  }
};

// F(T) = -(alpha*theta/2)*(coth(theta/(2T)) - 1), with F(0) = 0.
inline double band_gap_shift(const TemperatureModel& model, double temperature) {
  if (temperature < 0.0) throw ConfigError("temperature must be >= 0");
  if (temperature == 0.0) return 0.0;
  // coth(x) - 1 = 2/(e^{2x} - 1) with 2x = theta/T; expm1 keeps the T->0 tail exact.
  return -model.alpha * model.theta / std::expm1(model.theta / temperature);
}

// Static physical parameters of the N-exciton / single-cavity system.
// All gammas are HWHM amplitude-damping rates in mueV; they enter the
// effective Hamiltonians as -i*gamma on the diagonal.
struct SystemParams {
  int n_emitters = 0;
  std::vector<double> omega_x0;  // exciton energies at T=0, mueV
  double omega_c0 = 0.0;         // cavity energy at T=0, mueV
  std::vector<double> g;         // couplings, mueV
  std::vector<double> gamma_x;   // exciton HWHM, mueV
  double gamma_c = 0.0;          // cavity HWHM, mueV
  double gamma_s = 0.0;          // spectrometer HWHM, mueV
  TemperatureModel temp_model;

  void validate() const {
    if (n_emitters < 1) throw ConfigError("n_emitters must be >= 1");
    const auto n = static_cast<std::size_t>(n_emitters);
    if (omega_x0.size() != n || g.size() != n || gamma_x.size() != n)
      throw ConfigError("omega_x0, g, gamma_x must all have length n_emitters");
    for (double v : g)
      if (v < 0.0) throw ConfigError("couplings g must be >= 0");
    for (double v : gamma_x)
      if (v < 0.0) throw ConfigError("gamma_x must be >= 0");
    if (gamma_c < 0.0) throw ConfigError("gamma_c must be >= 0");
    if (gamma_s < 0.0) throw ConfigError("gamma_s must be >= 0");
    temp_model.validate();
  }
};

// Parameters evaluated at a working temperature.
struct TunedParams {
  int n_emitters = 0;
  std::vector<double> omega_x;  // mueV, absolute (or frame-shifted)
  double omega_c = 0.0;
  std::vector<double> g;
  std::vector<double> gamma_x;
  double gamma_c = 0.0;
  double gamma_s = 0.0;
  double temperature = 0.0;  // K

  Complex omega_x_tilde(int n) const {
    return {omega_x[static_cast<std::size_t>(n)],
            -gamma_x[static_cast<std::size_t>(n)]};
  }
  Complex omega_c_tilde() const { return {omega_c, -gamma_c}; }

  // Same system with all energies measured relative to `ref`.
  TunedParams shifted(double ref) const {
    TunedParams out = *this;
    for (double& w : out.omega_x) w -= ref;
    out.omega_c -= ref;
    return out;
  }
};

inline TunedParams tune(const SystemParams& params, double temperature) {
  params.validate();
  const double shift = band_gap_shift(params.temp_model, temperature);
  TunedParams out;
  out.n_emitters = params.n_emitters;
  out.omega_x = params.omega_x0;
  for (double& w : out.omega_x) w += shift;
  out.omega_c = params.omega_c0 + params.temp_model.eta * shift;
  out.g = params.g;
  out.gamma_x = params.gamma_x;
  out.gamma_c = params.gamma_c;
  out.gamma_s = params.gamma_s;
  out.temperature = temperature;
  return out;
}

}  // namespace tcfwm
