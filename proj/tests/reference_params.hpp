#pragma once

#include "tcfwm/params.hpp"

// Shared three-exciton reference system used across the test suite.
inline tcfwm::SystemParams reference_params() {
  tcfwm::SystemParams p;
  p.n_emitters = 3;
  p.omega_x0 = {1334610.6, 1334741.2, 1334858.4};
  p.omega_c0 = 1334573.2;
  p.g = {43.0, 40.0, 31.5};
  p.gamma_x = {18.0, 11.5, 16.0};
  p.gamma_c = 36.5;
  p.gamma_s = 4.0;
  p.temp_model = {60.9, 58.9, 0.227};
  return p;
}
