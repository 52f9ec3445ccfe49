#include <catch2/catch_amalgamated.hpp>

#include "reference_params.hpp"
#include "tcfwm/hamiltonian.hpp"
#include "tcfwm/operators.hpp"
#include "tcfwm/spectrum.hpp"

using namespace tcfwm;
using Catch::Matchers::WithinAbs;

namespace {

TunedParams resonant(int n, double g, double gamma_x, double gamma_c) {
  TunedParams t;
  t.n_emitters = n;
  t.omega_x.assign(static_cast<std::size_t>(n), 0.0);
  t.omega_c = 0.0;
  t.g.assign(static_cast<std::size_t>(n), g);
  t.gamma_x.assign(static_cast<std::size_t>(n), gamma_x);
  t.gamma_c = gamma_c;
  return t;
}

}  // namespace

TEST_CASE("photon operators respect the truncation", "[hamiltonian]") {
  const LadderBasis basis = build_basis(2);
  const MatrixXcd a = photon_annihilation(basis);
  const int two_ph = basis.index_of(BasisState{{0, 0}, 2});
  const int one_ph = basis.index_of(BasisState{{0, 0}, 1});
  CHECK_THAT(std::abs(a(one_ph, two_ph) - std::sqrt(2.0)), WithinAbs(0.0, 1e-15));
  CHECK_THAT(std::abs(a(0, one_ph) - 1.0), WithinAbs(0.0, 1e-15));
  // a annihilates every zero-photon state.
  for (int c = 0; c < basis.dim(); ++c)
    if (basis.states[static_cast<std::size_t>(c)].n_c == 0)
      CHECK(a.col(c).norm() == 0.0);
  CHECK((photon_creation(basis) - a.adjoint()).norm() == 0.0);
}

TEST_CASE("exciton operators are two-level", "[hamiltonian]") {
  const LadderBasis basis = build_basis(3);
  for (int n = 0; n < 3; ++n) {
    const MatrixXcd sig = exciton_lowering(basis, n);
    CHECK((sig * sig).norm() == 0.0);  // Pauli lowering squared
    const MatrixXcd num = sig.adjoint() * sig;
    for (int i = 0; i < basis.dim(); ++i)
      CHECK_THAT(std::abs(num(i, i) -
                          static_cast<double>(basis.states[static_cast<std::size_t>(i)]
                                                  .n_x[static_cast<std::size_t>(n)])),
                 WithinAbs(0.0, 1e-15));
  }
}

TEST_CASE("full Hamiltonian is Hermitian and damping is diagonal", "[hamiltonian]") {
  const TunedParams tuned = tune(reference_params(), 19.0);
  const LadderBasis basis = build_basis(3);
  const MatrixXcd h = hamiltonian(basis, tuned);
  CHECK((h - h.adjoint()).norm() < 1e-9 * h.norm());
  const MatrixXcd gam = damping_operator(basis, tuned);
  CHECK((gam - MatrixXcd(gam.diagonal().asDiagonal())).norm() == 0.0);
  CHECK_THAT(std::abs(gam(1, 1) - Complex(36.5, 0.0)), WithinAbs(0.0, 1e-12));
  const int pair01 = basis.index_of(BasisState{{1, 1, 0}, 0});
  CHECK_THAT(std::abs(gam(pair01, pair01) - Complex(18.0 + 11.5, 0.0)),
             WithinAbs(0.0, 1e-12));
}

TEST_CASE("first-rung Hamiltonian structure", "[hamiltonian]") {
  const TunedParams tuned = tune(reference_params(), 19.0);
  const MatrixXcd h1 = build_h1(tuned);
  REQUIRE(h1.rows() == 4);
  CHECK(h1(0, 0) == tuned.omega_c_tilde());
  for (int n = 0; n < 3; ++n) {
    CHECK(h1(0, n + 1) == Complex(tuned.g[static_cast<std::size_t>(n)], 0.0));
    CHECK(h1(n + 1, n + 1) == tuned.omega_x_tilde(n));
  }
  CHECK((h1 - h1.transpose()).norm() == 0.0);  // complex symmetric
  CHECK(h1(1, 2) == Complex(0.0, 0.0));
}

TEST_CASE("second-rung Hamiltonian structure", "[hamiltonian]") {
  const TunedParams tuned = tune(reference_params(), 19.0);
  const MatrixXcd h2 = build_h2(tuned);
  REQUIRE(h2.rows() == 7);
  CHECK(h2(0, 0) == 2.0 * tuned.omega_c_tilde());
  for (int n = 0; n < 3; ++n) {
    CHECK_THAT(std::abs(h2(0, 1 + n) -
                        std::sqrt(2.0) * tuned.g[static_cast<std::size_t>(n)]),
               WithinAbs(0.0, 1e-12));
    CHECK(h2(1 + n, 1 + n) == tuned.omega_c_tilde() + tuned.omega_x_tilde(n));
  }
  // Pair order (0,1), (0,2), (1,2); pair (n,m) couples photon+n with g_m.
  CHECK(h2(4, 4) == tuned.omega_x_tilde(0) + tuned.omega_x_tilde(1));
  CHECK(h2(6, 6) == tuned.omega_x_tilde(1) + tuned.omega_x_tilde(2));
  CHECK(h2(1, 4) == Complex(tuned.g[1], 0.0));
  CHECK(h2(2, 4) == Complex(tuned.g[0], 0.0));
  CHECK(h2(3, 6) == Complex(tuned.g[1], 0.0));
  CHECK(h2(1, 6) == Complex(0.0, 0.0));  // photon+X1 does not touch pair (2,3)
  CHECK((h2 - h2.transpose()).norm() == 0.0);
}

TEST_CASE("zero damping gives real spectra", "[hamiltonian]") {
  const TunedParams tuned = resonant(3, 40.0, 0.0, 0.0);
  const RungSpectrum rungs = rung_spectrum(tuned);
  for (int k = 0; k < rungs.lambda1().size(); ++k)
    CHECK_THAT(rungs.lambda1()(k).imag(), WithinAbs(0.0, 1e-10));
  for (int k = 0; k < rungs.lambda2().size(); ++k)
    CHECK_THAT(rungs.lambda2()(k).imag(), WithinAbs(0.0, 1e-10));
}

TEST_CASE("resonant vacuum Rabi splitting is 2g sqrt(N)", "[hamiltonian]") {
  for (int n : {1, 2, 3}) {
    const double g = 40.0;
    const TunedParams tuned = resonant(n, g, 0.0, 0.0);
    const EigenSystem sys = eigendecompose(build_h1(tuned));
    const double split = sys.values(sys.values.size() - 1).real() - sys.values(0).real();
    CHECK_THAT(split, WithinAbs(2.0 * g * std::sqrt(static_cast<double>(n)), 1e-9));
  }
}
