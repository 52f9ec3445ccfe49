#include <catch2/catch_amalgamated.hpp>

#include "reference_params.hpp"
#include "tcfwm/detuning.hpp"
#include "tcfwm/params.hpp"

using namespace tcfwm;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("band-gap shift anchors", "[params]") {
  const TemperatureModel model{60.9, 58.9, 0.227};
  CHECK(band_gap_shift(model, 0.0) == 0.0);
  // Independently evaluated -alpha*theta/(e^{theta/T} - 1).
  CHECK_THAT(band_gap_shift(model, 19.0), WithinRel(-169.21493744257975, 1e-12));
  CHECK_THAT(band_gap_shift(model, 13.5), WithinRel(-46.290360433477424, 1e-12));
  CHECK_THROWS_AS(band_gap_shift(model, -1.0), ConfigError);
}

TEST_CASE("band-gap shift is monotone decreasing in T", "[params]") {
  const TemperatureModel model{60.9, 58.9, 0.227};
  double last = 0.0;
  for (double t = 1.0; t <= 60.0; t += 1.0) {
    const double f = band_gap_shift(model, t);
    CHECK(f < last);
    last = f;
  }
}

TEST_CASE("parameter validation", "[params]") {
  SystemParams p = reference_params();
  CHECK_NOTHROW(p.validate());
  SECTION("length mismatch") {
    p.g.pop_back();
    CHECK_THROWS_AS(p.validate(), ConfigError);
  }
  SECTION("negative damping") {
    p.gamma_x[1] = -1.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
  }
  SECTION("negative coupling") {
    p.g[0] = -5.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
  }
  SECTION("eta out of range") {
    p.temp_model.eta = 1.5;
    CHECK_THROWS_AS(p.validate(), ConfigError);
  }
  SECTION("no emitters") {
    p.n_emitters = 0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
  }
}

TEST_CASE("tuning shifts excitons by F and the cavity by eta*F", "[params]") {
  const SystemParams p = reference_params();
  const double f = band_gap_shift(p.temp_model, 19.0);
  const TunedParams tuned = tune(p, 19.0);
  for (int n = 0; n < 3; ++n)
    CHECK_THAT(tuned.omega_x[static_cast<std::size_t>(n)],
               WithinAbs(p.omega_x0[static_cast<std::size_t>(n)] + f, 1e-9));
  CHECK_THAT(tuned.omega_c, WithinAbs(p.omega_c0 + p.temp_model.eta * f, 1e-9));
  CHECK(tuned.gamma_c == p.gamma_c);
  CHECK(tuned.omega_x_tilde(0) == Complex(tuned.omega_x[0], -18.0));
  CHECK(tuned.omega_c_tilde() == Complex(tuned.omega_c, -36.5));
}

TEST_CASE("frame shift subtracts ref from every energy", "[params]") {
  const TunedParams tuned = tune(reference_params(), 19.0);
  const TunedParams shifted = tuned.shifted(tuned.omega_c);
  CHECK_THAT(shifted.omega_c, WithinAbs(0.0, 1e-9));
  for (int n = 0; n < 3; ++n)
    CHECK_THAT(shifted.omega_x[static_cast<std::size_t>(n)],
               WithinAbs(tuned.omega_x[static_cast<std::size_t>(n)] - tuned.omega_c, 1e-9));
  CHECK(shifted.gamma_x == tuned.gamma_x);
}

TEST_CASE("detuning anchors from the reference system", "[params]") {
  const SystemParams p = reference_params();
  // delta = omega_c - g-weighted exciton mean; anchors tolerate parameter rounding.
  CHECK_THAT(average_detuning(tune(p, 19.0)), WithinAbs(-29.0, 20.0));
  CHECK_THAT(average_detuning(tune(p, 13.5)), WithinAbs(-133.0, 20.0));
}

TEST_CASE("detuning is shift invariant and monotone in T", "[params]") {
  const SystemParams p = reference_params();
  TunedParams tuned = tune(p, 19.0);
  const double base = average_detuning(tuned);
  TunedParams moved = tuned;
  for (double& w : moved.omega_x) w += 123.0;
  moved.omega_c += 123.0;
  CHECK_THAT(average_detuning(moved), WithinAbs(base, 1e-9));
  CHECK(average_detuning(tune(p, 25.0)) > average_detuning(tune(p, 10.0)));
  TunedParams nog = tuned;
  for (double& g : nog.g) g = 0.0;
  CHECK_THROWS_AS(average_detuning(nog), ConfigError);
}

TEST_CASE("temperature_for_detuning inverts the detuning curve", "[params]") {
  const SystemParams p = reference_params();
  const double target = average_detuning(tune(p, 19.0));
  const double t_star = temperature_for_detuning(p, target);
  CHECK_THAT(average_detuning(tune(p, t_star)), WithinAbs(target, 0.01));
  CHECK_THAT(t_star, WithinAbs(19.0, 0.01));
  CHECK_THROWS_AS(temperature_for_detuning(p, 1e6), ConfigError);
}
