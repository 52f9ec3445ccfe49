#pragma once

#include <Eigen/Dense>
#include <atomic>
#include <optional>
#include <thread>
#include <vector>

#include "tcfwm/pulses.hpp"
#include "tcfwm/spectrum.hpp"
#include "tcfwm/superoperator.hpp"

namespace tcfwm {

// Upper bound on worker threads for grid evaluations (set by the CLI
// --threads flag). Results are independent of this value.
inline std::atomic<int>& max_threads() {
  static std::atomic<int> n{1};
  return n;
}

namespace detail {

template <typename Fn>
void parallel_columns(int n_cols, Fn&& fn) {
  const int want = std::min<int>(max_threads().load(), n_cols);
  if (want <= 1) {
    for (int c = 0; c < n_cols; ++c) fn(c);
    return;
  }
  std::vector<std::thread> workers;
  workers.reserve(static_cast<std::size_t>(want));
  for (int w = 0; w < want; ++w)
    workers.emplace_back([&, w] {
      for (int c = w; c < n_cols; c += want) fn(c);
    });
  for (auto& t : workers) t.join();
}

inline void check_grid(const VectorXd& grid, const char* name) {
  if (grid.size() == 0) throw ConfigError(std::string(name) + " grid is empty");
  for (int i = 1; i < grid.size(); ++i)
    if (!(grid(i) > grid(i - 1)))
      throw ConfigError(std::string(name) + " grid must be strictly increasing");
}

}  // namespace detail

// Exact expansion of the third-order polarization as a finite sum of
// exponentials:
//   P(t,tau) = sum_j exp(-i*w_j t/hbar) * { sum_k a_jk exp(+i*conj(l1_k) tau/hbar)   tau >= 0
//                                         { sum_k b_jk exp(+i*l2_k tau/hbar)          tau <  0
// All stored frequencies are in a frame shifted by ref_energy (one photon of
// ref_energy per excitation order); absolute values are recovered through the
// *_abs accessors. Time-domain signals are reported in this rotating frame.
struct ResponseCoefficients {
  double ref_energy = 0.0;   // mueV subtracted per excitation
  double temperature = 0.0;  // K
  double gamma_s = 0.0;      // spectrometer HWHM, mueV
  PulseConfig pulses;
  VectorXcd omega_tilde;  // M emission frequencies, shifted frame
  VectorXcd lambda1;      // N1 first-rung levels, shifted
  VectorXcd lambda2;      // N2 second-rung levels, shifted
  MatrixXcd a_coef;       // M x N1, positive-delay coefficients
  MatrixXcd b_coef;       // M x N2, negative-delay coefficients

  int n_transitions() const { return static_cast<int>(omega_tilde.size()); }

  VectorXcd omega_tilde_abs() const {
    return omega_tilde.array() + Complex(ref_energy, 0.0);
  }
  VectorXcd lambda1_abs() const { return lambda1.array() + Complex(ref_energy, 0.0); }
  VectorXcd lambda2_abs() const {
    return lambda2.array() + Complex(2.0 * ref_energy, 0.0);
  }

  // Per-emission-frequency amplitude at a given delay.
  VectorXcd delay_amplitudes(double tau) const {
    if (tau >= 0.0) {
      VectorXcd ph(lambda1.size());
      for (int k = 0; k < lambda1.size(); ++k)
        ph(k) = std::exp(kI * std::conj(lambda1(k)) * (tau / kHbar));
      return a_coef * ph;
    }
    VectorXcd ph(lambda2.size());
    for (int k = 0; k < lambda2.size(); ++k)
      ph(k) = std::exp(kI * lambda2(k) * (tau / kHbar));
    return b_coef * ph;
  }
};

// Propagates the two-pulse sequence through the eigendecompositions of the
// rung Hamiltonians and of the restricted Lindblad superoperator, starting
// from the ground state. `ref` defaults to the cavity energy at the working
// temperature.
inline ResponseCoefficients response_coefficients(const TunedParams& tuned_abs,
                                                  const PulseConfig& pulses = {},
                                                  std::optional<double> ref = {}) {
  const double ref_energy = ref.value_or(tuned_abs.omega_c);
  const TunedParams tuned = tuned_abs.shifted(ref_energy);
  const LadderBasis basis = build_basis(tuned.n_emitters);
  const MatrixXcd a = photon_annihilation(basis);
  const int d = basis.dim();
  const int n1 = basis.n1();
  const int n2 = basis.n2();

  const RungSpectrum rungs = rung_spectrum(tuned);
  const SuperoperatorMatrix super = lindblad_superoperator(basis, tuned);
  const EigenSystem emission = eigendecompose(super.matrix);
  const int m = super.size();

  // Trace projector: s_q = Tr(|ket_q><bra_q| a) = <bra_q| a |ket_q>.
  VectorXcd trace_vec(m);
  for (int q = 0; q < m; ++q)
    trace_vec(q) = a(super.pairs[static_cast<std::size_t>(q)].bra,
                     super.pairs[static_cast<std::size_t>(q)].ket);
  const VectorXcd emit_row = emission.right.transpose() * trace_vec;

  auto project = [&](const MatrixXcd& rho) {
    VectorXcd v(m);
    for (int q = 0; q < m; ++q)
      v(q) = rho(super.pairs[static_cast<std::size_t>(q)].ket,
                 super.pairs[static_cast<std::size_t>(q)].bra);
    return v;
  };

  MatrixXcd rho0 = MatrixXcd::Zero(d, d);
  rho0(0, 0) = 1.0;

  ResponseCoefficients out;
  out.ref_energy = ref_energy;
  out.temperature = tuned.temperature;
  out.gamma_s = tuned.gamma_s;
  out.pulses = pulses;
  out.omega_tilde = emission.values;
  out.lambda1 = rungs.lambda1();
  out.lambda2 = rungs.lambda2();
  out.a_coef.resize(m, n1);
  out.b_coef.resize(m, n2);

  // Positive delay: E1 creates the ground<->rung1 coherence row
  // rho1 = sum_j c_j |0><j|; between the pulses c evolves with conj(H1~).
  {
    const MatrixXcd rho1 = apply_pulse1(rho0, a, pulses);
    VectorXcd c0(n1);
    for (int j = 0; j < n1; ++j) c0(j) = rho1(0, 1 + j);
    const VectorXcd mode_amp = rungs.rung1.left.conjugate() * c0;
    for (int k = 0; k < n1; ++k) {
      MatrixXcd rho_mode = MatrixXcd::Zero(d, d);
      for (int j = 0; j < n1; ++j) rho_mode(0, 1 + j) = std::conj(rungs.rung1.right(j, k));
      const VectorXcd w = project(apply_pulse2(rho_mode, a, pulses));
      out.a_coef.col(k) =
          emit_row.array() * (emission.left * w).array() * mode_amp(k);
    }
  }

  // Negative delay: E2 creates the two-photon (rung2<->ground) coherence
  // column rho1 = sum_i c_i |i><0|, evolving with H2~.
  {
    const MatrixXcd rho1 = apply_pulse2(rho0, a, pulses);
    VectorXcd c0(n2);
    const int r2 = basis.rung_offset(2);
    for (int i = 0; i < n2; ++i) c0(i) = rho1(r2 + i, 0);
    const VectorXcd mode_amp = rungs.rung2.left * c0;
    for (int k = 0; k < n2; ++k) {
      MatrixXcd rho_mode = MatrixXcd::Zero(d, d);
      for (int i = 0; i < n2; ++i) rho_mode(r2 + i, 0) = rungs.rung2.right(i, k);
      const VectorXcd w = project(apply_pulse1(rho_mode, a, pulses));
      out.b_coef.col(k) =
          emit_row.array() * (emission.left * w).array() * mode_amp(k);
    }
  }

  if (!pulses.include_prefactor) {
    // Composing the pulse actions contributes (-i)^3/2 = i/2; divide it out.
    const Complex pref = kI * 0.5;
    out.a_coef /= pref;
    out.b_coef /= pref;
  }
  return out;
}

// P(t,tau) at a single point; t >= 0 is emission time after the second pulse.
inline Complex fwm_polarization(const ResponseCoefficients& coeffs, double t,
                                double tau) {
  if (t < 0.0) throw ConfigError("fwm_polarization: t must be >= 0");
  const VectorXcd amp = coeffs.delay_amplitudes(tau);
  Complex p = 0.0;
  for (int j = 0; j < coeffs.n_transitions(); ++j)
    p += amp(j) * std::exp(-kI * coeffs.omega_tilde(j) * (t / kHbar));
  return p;
}

// Sampled P(t,tau); rows index t, columns index tau.
struct FwmSignal {
  VectorXd t_grid;    // ps
  VectorXd tau_grid;  // ps
  Eigen::MatrixXcd values;
  double ref_energy = 0.0;
  double survival_time = 0.0;  // ps; 0 when no post-selection applied
  std::string provenance = "analytic";
};

inline FwmSignal fwm_time_map(const ResponseCoefficients& coeffs,
                              const VectorXd& t_grid, const VectorXd& tau_grid) {
  detail::check_grid(t_grid, "t");
  detail::check_grid(tau_grid, "tau");
  if (t_grid(0) < 0.0) throw ConfigError("fwm_time_map: t grid must start at t >= 0");
  FwmSignal sig;
  sig.t_grid = t_grid;
  sig.tau_grid = tau_grid;
  sig.ref_energy = coeffs.ref_energy;
  sig.values.resize(t_grid.size(), tau_grid.size());
  // Emission phases are shared by all delays.
  MatrixXcd phases(t_grid.size(), coeffs.n_transitions());
  for (int i = 0; i < t_grid.size(); ++i)
    for (int j = 0; j < coeffs.n_transitions(); ++j)
      phases(i, j) = std::exp(-kI * coeffs.omega_tilde(j) * (t_grid(i) / kHbar));
  detail::parallel_columns(static_cast<int>(tau_grid.size()), [&](int c) {
    sig.values.col(c) = phases * coeffs.delay_amplitudes(tau_grid(c));
  });
  return sig;
}

// Closed-form emission spectrum at fixed delay, absolute energy axis:
// P~(omega,tau) = sum_j A_j(tau) * i*hbar / (omega - w_j + i*gamma_s).
inline VectorXcd fwm_spectrum(const ResponseCoefficients& coeffs,
                              const VectorXd& omega_grid, double tau) {
  detail::check_grid(omega_grid, "omega");
  const VectorXcd amp = coeffs.delay_amplitudes(tau);
  const VectorXcd omega_abs = coeffs.omega_tilde_abs();
  VectorXcd out = VectorXcd::Zero(omega_grid.size());
  for (int i = 0; i < omega_grid.size(); ++i) {
    Complex v = 0.0;
    for (int j = 0; j < coeffs.n_transitions(); ++j)
      v += amp(j) * kI * kHbar /
           (omega_grid(i) - omega_abs(j) + kI * coeffs.gamma_s);
    out(i) = v;
  }
  return out;
}

// 2D spectrum on absolute axes; rows index omega, columns index omega_tau.
// The omega_tau axis is flipped so first-rung resonances appear at
// omega_tau = +Re(lambda1) and coupled peaks align on the diagonal.
struct Fwm2D {
  VectorXd omega_grid;      // mueV
  VectorXd omega_tau_grid;  // mueV
  Eigen::MatrixXcd values;
  double gamma_s = 0.0;
  double survival_time = 0.0;
  bool omega_tau_flipped = true;
  bool phase_corrected = false;
};

// Closed-form positive-delay 2D FT; a survival time t_s > 0 restricts the
// emission integral to t >= t_s.
inline Fwm2D fwm_2d(const ResponseCoefficients& coeffs, const VectorXd& omega_grid,
                    const VectorXd& omega_tau_grid, double t_s = 0.0) {
  detail::check_grid(omega_grid, "omega");
  detail::check_grid(omega_tau_grid, "omega_tau");
  if (t_s < 0.0) throw ConfigError("fwm_2d: survival time must be >= 0");
  const VectorXcd omega_abs = coeffs.omega_tilde_abs();
  const VectorXcd lambda1_abs = coeffs.lambda1_abs();
  const int m = coeffs.n_transitions();
  const int n1 = static_cast<int>(coeffs.lambda1.size());

  Fwm2D out;
  out.omega_grid = omega_grid;
  out.omega_tau_grid = omega_tau_grid;
  out.gamma_s = coeffs.gamma_s;
  out.survival_time = t_s;
  out.values.resize(omega_grid.size(), omega_tau_grid.size());

  // Emission-pole factors, including the post-selection phase shift.
  MatrixXcd emit(omega_grid.size(), m);
  for (int i = 0; i < omega_grid.size(); ++i)
    for (int j = 0; j < m; ++j) {
      const Complex z = omega_grid(i) - omega_abs(j) + kI * coeffs.gamma_s;
      emit(i, j) = kI * kHbar / z * std::exp(kI * z * (t_s / kHbar));
    }
  detail::parallel_columns(static_cast<int>(omega_tau_grid.size()), [&](int c) {
    VectorXcd delay(n1);
    for (int k = 0; k < n1; ++k)
      delay(k) = kI * kHbar / (std::conj(lambda1_abs(k)) - omega_tau_grid(c));
    out.values.col(c) = emit * (coeffs.a_coef * delay);
  });
  return out;
}

// Integral of |P(t,tau)|^2 over emission time, evaluated in closed form
// from the pairwise pole structure.
inline VectorXd time_integrated_power(const ResponseCoefficients& coeffs,
                                      const VectorXd& tau_grid) {
  detail::check_grid(tau_grid, "tau");
  const int m = coeffs.n_transitions();
  MatrixXcd pair(m, m);
  for (int j = 0; j < m; ++j)
    for (int l = 0; l < m; ++l)
      pair(j, l) = kHbar / (kI * (coeffs.omega_tilde(j) - std::conj(coeffs.omega_tilde(l))));
  VectorXd out(tau_grid.size());
  detail::parallel_columns(static_cast<int>(tau_grid.size()), [&](int c) {
    const VectorXcd amp = coeffs.delay_amplitudes(tau_grid(c));
    out(c) = (amp.adjoint() * pair.transpose() * amp)(0).real();
  });
  return out;
}

}  // namespace tcfwm
