#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "tcfwm/basis.hpp"
#include "tcfwm/params.hpp"

namespace tcfwm {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

// Photon annihilation operator on the truncated basis: lowers n_c by one
// with amplitude sqrt(n_c).
inline MatrixXcd photon_annihilation(const LadderBasis& basis) {
  const int d = basis.dim();
  MatrixXcd a = MatrixXcd::Zero(d, d);
  for (int col = 0; col < d; ++col) {
    const auto& s = basis.states[static_cast<std::size_t>(col)];
    if (s.n_c == 0) continue;
    BasisState lo = s;
    lo.n_c -= 1;
    const int row = basis.index_of(lo);
    if (row >= 0) a(row, col) = std::sqrt(static_cast<double>(s.n_c));
  }
  return a;
}

inline MatrixXcd photon_creation(const LadderBasis& basis) {
  return photon_annihilation(basis).adjoint();
}

// Lowering operator of exciton n (0-based).
inline MatrixXcd exciton_lowering(const LadderBasis& basis, int n) {
  const int d = basis.dim();
  MatrixXcd sig = MatrixXcd::Zero(d, d);
  for (int col = 0; col < d; ++col) {
    const auto& s = basis.states[static_cast<std::size_t>(col)];
    if (s.n_x[static_cast<std::size_t>(n)] == 0) continue;
    BasisState lo = s;
    lo.n_x[static_cast<std::size_t>(n)] = 0;
    const int row = basis.index_of(lo);
    if (row >= 0) sig(row, col) = 1.0;
  }
  return sig;
}

// Hermitian Tavis-Cummings Hamiltonian on the truncated basis (no damping).
inline MatrixXcd hamiltonian(const LadderBasis& basis, const TunedParams& tuned) {
  const MatrixXcd a = photon_annihilation(basis);
  MatrixXcd h = tuned.omega_c * (a.adjoint() * a);
  for (int n = 0; n < tuned.n_emitters; ++n) {
    const MatrixXcd sig = exciton_lowering(basis, n);
    h += tuned.omega_x[static_cast<std::size_t>(n)] * (sig.adjoint() * sig);
    h += tuned.g[static_cast<std::size_t>(n)] * (a.adjoint() * sig + sig.adjoint() * a);
  }
  return h;
}

// Diagonal damping operator Gamma = gamma_c a^dag a + sum_n gamma_xn n_xn,
// so the effective Hamiltonian is H - i*Gamma.
inline MatrixXcd damping_operator(const LadderBasis& basis, const TunedParams& tuned) {
  const int d = basis.dim();
  MatrixXcd gam = MatrixXcd::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    const auto& s = basis.states[static_cast<std::size_t>(i)];
    double v = tuned.gamma_c * s.n_c;
    for (int n = 0; n < tuned.n_emitters; ++n)
      v += tuned.gamma_x[static_cast<std::size_t>(n)] * s.n_x[static_cast<std::size_t>(n)];
    gam(i, i) = v;
  }
  return gam;
}

}  // namespace tcfwm
