#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "tcfwm/operators.hpp"
#include "tcfwm/params.hpp"

namespace tcfwm {

// First-rung effective non-Hermitian Hamiltonian, (N+1)x(N+1), complex
// symmetric. Row/column 0 is the cavity, rows 1..N the excitons.
inline MatrixXcd build_h1(const TunedParams& tuned) {
  const int n = tuned.n_emitters;
  MatrixXcd h = MatrixXcd::Zero(n + 1, n + 1);
  h(0, 0) = tuned.omega_c_tilde();
  for (int k = 0; k < n; ++k) {
    h(0, k + 1) = tuned.g[static_cast<std::size_t>(k)];
    h(k + 1, 0) = tuned.g[static_cast<std::size_t>(k)];
    h(k + 1, k + 1) = tuned.omega_x_tilde(k);
  }
  return h;
}

// Second-rung effective Hamiltonian, N2xN2 with N2 = 1 + N(N+1)/2.
// State order: two-photon; photon+exciton n; exciton pairs (n,m), n<m,
// lexicographic. The two-photon row couples with sqrt(2)*g_n; the pair (n,m)
// couples to photon+exciton n with g_m and to photon+exciton m with g_n.
inline MatrixXcd build_h2(const TunedParams& tuned) {
  const int n = tuned.n_emitters;
  const int n2 = 1 + n * (n + 1) / 2;
  MatrixXcd h = MatrixXcd::Zero(n2, n2);
  const Complex wc = tuned.omega_c_tilde();
  h(0, 0) = 2.0 * wc;
  for (int k = 0; k < n; ++k) {
    const double sq2g = std::sqrt(2.0) * tuned.g[static_cast<std::size_t>(k)];
    h(0, 1 + k) = sq2g;
    h(1 + k, 0) = sq2g;
    h(1 + k, 1 + k) = wc + tuned.omega_x_tilde(k);
  }
  int pair = 1 + n;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j, ++pair) {
      h(pair, pair) = tuned.omega_x_tilde(i) + tuned.omega_x_tilde(j);
      h(1 + i, pair) = tuned.g[static_cast<std::size_t>(j)];
      h(pair, 1 + i) = tuned.g[static_cast<std::size_t>(j)];
      h(1 + j, pair) = tuned.g[static_cast<std::size_t>(i)];
      h(pair, 1 + j) = tuned.g[static_cast<std::size_t>(i)];
    }
  }
  return h;
}

}  // namespace tcfwm
