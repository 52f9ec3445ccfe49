#pragma once

#include <Eigen/Dense>
#include <vector>

#include "tcfwm/operators.hpp"

namespace tcfwm {

// Density-matrix element |ket><bra| connecting adjacent rungs.
struct CoherencePair {
  int ket = 0;  // basis index in rung r+1
  int bra = 0;  // basis index in rung r
};

// Ordered coherence subspace: first the N1 ground<->rung1 elements
// |i><0|, then the N1*N2 rung1<->rung2 elements |i><j| (i over rung 2,
// j over rung 1, i-major).
inline std::vector<CoherencePair> coherence_subspace(const LadderBasis& basis) {
  std::vector<CoherencePair> pairs;
  pairs.reserve(static_cast<std::size_t>(basis.n_transitions()));
  const int r1 = basis.rung_offset(1);
  const int r2 = basis.rung_offset(2);
  for (int i = r1; i < r2; ++i) pairs.push_back({i, 0});
  for (int i = r2; i < basis.dim(); ++i)
    for (int j = r1; j < r2; ++j) pairs.push_back({i, j});
  return pairs;
}

// Full Lindblad action L(rho) of Eq. of motion i*hbar*drho/dt = L(rho):
// L(rho) = [H,rho] - i*gamma_c(a^dag a rho + rho a^dag a - 2 a rho a^dag)
//          - i*sum_n gamma_xn(sig^dag sig rho + rho sig^dag sig - 2 sig rho sig^dag).
class LindbladGenerator {
 public:
  LindbladGenerator(const LadderBasis& basis, const TunedParams& tuned)
      : a_(photon_annihilation(basis)),
        h_(hamiltonian(basis, tuned)),
        gamma_c_(tuned.gamma_c) {
    sigmas_.reserve(static_cast<std::size_t>(tuned.n_emitters));
    for (int n = 0; n < tuned.n_emitters; ++n)
      sigmas_.push_back(exciton_lowering(basis, n));
    gamma_x_ = tuned.gamma_x;
    number_c_ = a_.adjoint() * a_;
    for (std::size_t n = 0; n < sigmas_.size(); ++n)
      number_x_.push_back(sigmas_[n].adjoint() * sigmas_[n]);
  }

  MatrixXcd apply(const MatrixXcd& rho) const {
    MatrixXcd out = h_ * rho - rho * h_;
    out -= kI * gamma_c_ * (number_c_ * rho + rho * number_c_ - 2.0 * a_ * rho * a_.adjoint());
    for (std::size_t n = 0; n < sigmas_.size(); ++n)
      out -= kI * gamma_x_[n] *
             (number_x_[n] * rho + rho * number_x_[n] -
              2.0 * sigmas_[n] * rho * sigmas_[n].adjoint());
    return out;
  }

  const MatrixXcd& annihilation() const { return a_; }

 private:
  MatrixXcd a_;
  MatrixXcd h_;
  MatrixXcd number_c_;
  std::vector<MatrixXcd> sigmas_;
  std::vector<MatrixXcd> number_x_;
  std::vector<double> gamma_x_;
  double gamma_c_;
};

// L restricted to the coherence subspace, as an MxM matrix with
// M = N1*(1+N2). Its eigenvalues are the complex transition frequencies.
struct SuperoperatorMatrix {
  MatrixXcd matrix;
  std::vector<CoherencePair> pairs;

  int size() const { return static_cast<int>(matrix.rows()); }
};

inline SuperoperatorMatrix lindblad_superoperator(const LadderBasis& basis,
                                                  const TunedParams& tuned) {
  const LindbladGenerator gen(basis, tuned);
  const auto pairs = coherence_subspace(basis);
  const int m = static_cast<int>(pairs.size());
  const int d = basis.dim();
  SuperoperatorMatrix super;
  super.pairs = pairs;
  super.matrix.resize(m, m);
  for (int q = 0; q < m; ++q) {
    MatrixXcd unit = MatrixXcd::Zero(d, d);
    unit(pairs[static_cast<std::size_t>(q)].ket, pairs[static_cast<std::size_t>(q)].bra) = 1.0;
    const MatrixXcd image = gen.apply(unit);
    for (int p = 0; p < m; ++p)
      super.matrix(p, q) =
          image(pairs[static_cast<std::size_t>(p)].ket, pairs[static_cast<std::size_t>(p)].bra);
  }
  return super;
}

inline SuperoperatorMatrix lindblad_superoperator(const TunedParams& tuned) {
  return lindblad_superoperator(build_basis(tuned.n_emitters), tuned);
}

}  // namespace tcfwm
