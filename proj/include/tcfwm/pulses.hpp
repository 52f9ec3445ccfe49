#pragma once

#include <Eigen/Dense>

#include "tcfwm/operators.hpp"

namespace tcfwm {

// Complex pulse areas mu*E1, mu*E2. The FWM signal scales exactly as
// conj(area1)*area2^2. With include_prefactor the (-i)^3/2 of the
// third-order polarization is kept (it arises from composing the two
// pulse actions); switching it off drops that constant.
struct PulseConfig {
  Complex area1{1.0, 0.0};
  Complex area2{1.0, 0.0};
  bool include_prefactor = true;
};

// First pulse, first order: rho -> -i*conj(area1)*[a, rho].
inline MatrixXcd apply_pulse1(const MatrixXcd& rho, const MatrixXcd& a,
                              const PulseConfig& pulses) {
  return -kI * std::conj(pulses.area1) * (a * rho - rho * a);
}

// Second pulse, second order: rho -> -(area2^2/2)*[a^dag, [a^dag, rho]].
inline MatrixXcd apply_pulse2(const MatrixXcd& rho, const MatrixXcd& a,
                              const PulseConfig& pulses) {
  const MatrixXcd ad = a.adjoint();
  const MatrixXcd inner = ad * rho - rho * ad;
  return -0.5 * pulses.area2 * pulses.area2 * (ad * inner - inner * ad);
}

}  // namespace tcfwm
