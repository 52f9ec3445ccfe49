#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <numeric>
#include <vector>

#include "tcfwm/hamiltonian.hpp"

namespace tcfwm {

// Right/left eigenvector pair of a general complex matrix with eigenvalues
// sorted by ascending real part (tie-break: ascending imaginary part) and
// left normalized so that left*right = identity.
struct EigenSystem {
  VectorXcd values;
  MatrixXcd right;
  MatrixXcd left;
  double condition = 0.0;  // condition number of the right eigenvector matrix
};

inline EigenSystem eigendecompose(const MatrixXcd& mat, double cond_limit = 1e8) {
  Eigen::ComplexEigenSolver<MatrixXcd> solver(mat);
  if (solver.info() != Eigen::Success)
    throw NumericalError("eigendecomposition failed to converge");
  const int n = static_cast<int>(mat.rows());
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  const VectorXcd& raw = solver.eigenvalues();
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (raw(a).real() != raw(b).real()) return raw(a).real() < raw(b).real();
    return raw(a).imag() < raw(b).imag();
  });
  EigenSystem sys;
  sys.values.resize(n);
  sys.right.resize(n, n);
  for (int k = 0; k < n; ++k) {
    sys.values(k) = raw(order[static_cast<std::size_t>(k)]);
    sys.right.col(k) = solver.eigenvectors().col(order[static_cast<std::size_t>(k)]);
  }
  const Eigen::JacobiSVD<MatrixXcd> svd(sys.right);
  const double smin = svd.singularValues()(n - 1);
  sys.condition = smin > 0.0 ? svd.singularValues()(0) / smin
                             : std::numeric_limits<double>::infinity();
  if (sys.condition > cond_limit)
    throw NumericalError(
        "ill-conditioned diagonalization (eigenvector condition number " +
        std::to_string(sys.condition) + "); parameters are near an exceptional point");
  sys.left = sys.right.inverse();
  return sys;
}

// Complex energy levels and eigenvectors of the first and second rungs.
struct RungSpectrum {
  EigenSystem rung1;
  EigenSystem rung2;

  const VectorXcd& lambda1() const { return rung1.values; }
  const VectorXcd& lambda2() const { return rung2.values; }
};

inline RungSpectrum rung_spectrum(const MatrixXcd& h1, const MatrixXcd& h2,
                                  double cond_limit = 1e8) {
  return RungSpectrum{eigendecompose(h1, cond_limit), eigendecompose(h2, cond_limit)};
}

inline RungSpectrum rung_spectrum(const TunedParams& tuned, double cond_limit = 1e8) {
  return rung_spectrum(build_h1(tuned), build_h2(tuned), cond_limit);
}

// One optical transition of the truncated ladder. m < 0 labels a
// ground<->rung1 transition (frequency lambda1[k]); otherwise the transition
// couples rung-1 level m to rung-2 level k (frequency lambda2[k] - conj(lambda1[m])).
struct Transition {
  Complex frequency;
  int k = 0;
  int m = -1;
};

using TransitionSet = std::vector<Transition>;

inline TransitionSet transition_frequencies(const RungSpectrum& spec) {
  TransitionSet out;
  const int n1 = static_cast<int>(spec.lambda1().size());
  const int n2 = static_cast<int>(spec.lambda2().size());
  out.reserve(static_cast<std::size_t>(n1 * (1 + n2)));
  for (int k = 0; k < n1; ++k) out.push_back({spec.lambda1()(k), k, -1});
  for (int k = 0; k < n2; ++k)
    for (int m = 0; m < n1; ++m)
      out.push_back({spec.lambda2()(k) - std::conj(spec.lambda1()(m)), k, m});
  return out;
}

}  // namespace tcfwm
