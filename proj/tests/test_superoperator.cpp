#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "reference_params.hpp"
#include "tcfwm/spectrum.hpp"
#include "tcfwm/superoperator.hpp"

using namespace tcfwm;
using Catch::Matchers::WithinAbs;

namespace {

TunedParams random_params(std::mt19937& rng, int n) {
  // Energies drawn near the frame origin: valid parameters in the regime
  // where the eigensolver is well conditioned.
  std::uniform_real_distribution<double> energy(-300.0, 300.0);
  std::uniform_real_distribution<double> coupling(5.0, 60.0);
  std::uniform_real_distribution<double> damping(0.5, 40.0);
  TunedParams t;
  t.n_emitters = n;
  t.omega_c = energy(rng);
  t.gamma_c = damping(rng);
  for (int k = 0; k < n; ++k) {
    t.omega_x.push_back(energy(rng));
    t.g.push_back(coupling(rng));
    t.gamma_x.push_back(damping(rng));
  }
  return t;
}

MatrixXcd random_density(std::mt19937& rng, int d) {
  std::normal_distribution<double> gauss;
  MatrixXcd m(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) m(r, c) = Complex(gauss(rng), gauss(rng));
  MatrixXcd rho = m * m.adjoint();
  return rho / rho.trace();
}

}  // namespace

TEST_CASE("coherence subspace enumerates adjacent-rung pairs", "[superoperator]") {
  const LadderBasis basis = build_basis(3);
  const auto pairs = coherence_subspace(basis);
  REQUIRE(static_cast<int>(pairs.size()) == basis.n_transitions());
  for (std::size_t q = 0; q < pairs.size(); ++q) {
    const int kr = basis.states[static_cast<std::size_t>(pairs[q].ket)].rung();
    const int br = basis.states[static_cast<std::size_t>(pairs[q].bra)].rung();
    CHECK(kr == br + 1);
  }
  CHECK(pairs[0].ket == 1);
  CHECK(pairs[0].bra == 0);
}

TEST_CASE("vacuum is a fixed point of the Lindblad generator", "[superoperator]") {
  const LadderBasis basis = build_basis(3);
  const LindbladGenerator gen(basis, tune(reference_params(), 19.0).shifted(1334500.0));
  MatrixXcd rho = MatrixXcd::Zero(basis.dim(), basis.dim());
  rho(0, 0) = 1.0;
  CHECK(gen.apply(rho).norm() == 0.0);
}

TEST_CASE("Lindblad action preserves trace and Hermitian structure",
          "[superoperator]") {
  std::mt19937 rng(11);
  const LadderBasis basis = build_basis(2);
  const LindbladGenerator gen(basis, random_params(rng, 2));
  for (int trial = 0; trial < 5; ++trial) {
    const MatrixXcd rho = random_density(rng, basis.dim());
    const MatrixXcd img = gen.apply(rho);
    CHECK_THAT(std::abs(img.trace()), WithinAbs(0.0, 1e-10));
    // i*hbar*drho/dt = L(rho): Hermitian rho gives anti-Hermitian L(rho).
    CHECK((img + img.adjoint()).norm() < 1e-10 * std::max(1.0, img.norm()));
  }
}

TEST_CASE("coherence subspace is invariant under the generator", "[superoperator]") {
  std::mt19937 rng(13);
  const LadderBasis basis = build_basis(3);
  const TunedParams tuned = random_params(rng, 3);
  const LindbladGenerator gen(basis, tuned);
  const auto pairs = coherence_subspace(basis);
  std::normal_distribution<double> gauss;
  MatrixXcd rho = MatrixXcd::Zero(basis.dim(), basis.dim());
  for (const auto& p : pairs) rho(p.ket, p.bra) = Complex(gauss(rng), gauss(rng));
  MatrixXcd img = gen.apply(rho);
  for (const auto& p : pairs) img(p.ket, p.bra) = 0.0;
  CHECK(img.norm() < 1e-12 * rho.norm());
}

TEST_CASE("restricted matrix reproduces the generator on the subspace",
          "[superoperator]") {
  std::mt19937 rng(17);
  const LadderBasis basis = build_basis(2);
  const TunedParams tuned = random_params(rng, 2);
  const LindbladGenerator gen(basis, tuned);
  const SuperoperatorMatrix super = lindblad_superoperator(basis, tuned);
  std::normal_distribution<double> gauss;
  VectorXcd v(super.size());
  for (int q = 0; q < super.size(); ++q) v(q) = Complex(gauss(rng), gauss(rng));
  MatrixXcd rho = MatrixXcd::Zero(basis.dim(), basis.dim());
  for (int q = 0; q < super.size(); ++q)
    rho(super.pairs[static_cast<std::size_t>(q)].ket,
        super.pairs[static_cast<std::size_t>(q)].bra) = v(q);
  const MatrixXcd img = gen.apply(rho);
  const VectorXcd direct = super.matrix * v;
  for (int q = 0; q < super.size(); ++q)
    CHECK_THAT(std::abs(direct(q) -
                        img(super.pairs[static_cast<std::size_t>(q)].ket,
                            super.pairs[static_cast<std::size_t>(q)].bra)),
               WithinAbs(0.0, 1e-10));
}

TEST_CASE("superoperator spectrum equals the transition multiset",
          "[superoperator]") {
  std::mt19937 rng(23);
  auto key = [](const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  };
  for (int n : {1, 2, 3}) {
    for (int trial = 0; trial < 5; ++trial) {
      const TunedParams tuned = random_params(rng, n);
      const SuperoperatorMatrix super = lindblad_superoperator(tuned);
      const EigenSystem sys = eigendecompose(super.matrix);
      std::vector<Complex> got(sys.values.data(), sys.values.data() + sys.values.size());
      std::vector<Complex> want;
      for (const auto& tr : transition_frequencies(rung_spectrum(tuned)))
        want.push_back(tr.frequency);
      REQUIRE(got.size() == want.size());
      std::sort(got.begin(), got.end(), key);
      std::sort(want.begin(), want.end(), key);
      for (std::size_t i = 0; i < got.size(); ++i)
        CHECK_THAT(std::abs(got[i] - want[i]), WithinAbs(0.0, 1e-9));
    }
  }
}
