// Command-line front end: levels / fwm / fwm2d / fit / verify.
// Exit codes: 0 success, 2 config or input error, 3 numerical failure,
// 4 fit non-convergence.

#include <filesystem>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tcfwm/tcfwm.hpp"

namespace fs = std::filesystem;
using namespace tcfwm;

namespace {

struct CommonOpts {
  std::string config_path = "configs/default.json";
  double temperature = -1.0;  // CLI override, K
  double delta = std::numeric_limits<double>::quiet_NaN();
  double t_s = -1.0;
  double omega_cor = std::numeric_limits<double>::quiet_NaN();
  std::string out_dir = ".";
  std::string format;
  int threads = 0;
};

void add_common(CLI::App* cmd, CommonOpts& opt, bool with_run_flags = true) {
  cmd->add_option("--config", opt.config_path, "JSON config file")
      ->capture_default_str();
  if (with_run_flags) {
    cmd->add_option("--temperature", opt.temperature, "working temperature, K");
    cmd->add_option("--delta", opt.delta, "target average detuning, mueV");
    cmd->add_option("--ts", opt.t_s, "post-selection survival time, ps");
    cmd->add_option("--omega-cor", opt.omega_cor, "phase-correction frequency, mueV");
  }
  cmd->add_option("--out", opt.out_dir, "output directory")->capture_default_str();
  cmd->add_option("--format", opt.format, "csv | json");
  cmd->add_option("--threads", opt.threads, "worker threads for grid evaluations");
}

RunConfig resolve(const CommonOpts& opt) {
  RunConfig cfg = load_config(opt.config_path);
  if (opt.temperature >= 0.0) {
    cfg.temperature = opt.temperature;
    cfg.delta.reset();
  }
  if (!std::isnan(opt.delta)) {
    cfg.delta = opt.delta;
    cfg.temperature.reset();
  }
  if (opt.t_s >= 0.0) cfg.t_s = opt.t_s;
  if (!std::isnan(opt.omega_cor)) cfg.omega_cor = opt.omega_cor;
  if (!opt.format.empty()) cfg.format = opt.format;
  if (opt.threads > 0) cfg.threads = opt.threads;
  cfg.validate();
  max_threads().store(cfg.threads);
  fs::create_directories(opt.out_dir);
  return cfg;
}

double working_temperature(const RunConfig& cfg) {
  if (cfg.temperature) return *cfg.temperature;
  return temperature_for_detuning(cfg.system, *cfg.delta);
}

VectorXd omega_grid_for(const RunConfig& cfg, const ResponseCoefficients& coeffs) {
  const VectorXcd omega = coeffs.omega_tilde_abs();
  double lo = omega(0).real();
  double hi = omega(0).real();
  for (int j = 1; j < omega.size(); ++j) {
    lo = std::min(lo, omega(j).real());
    hi = std::max(hi, omega(j).real());
  }
  return GridSpec{lo - cfg.omega_window, hi + cfg.omega_window, cfg.omega_step}.build();
}

std::string join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

int cmd_levels(const CommonOpts& opt) {
  const RunConfig cfg = resolve(opt);
  const double temp = working_temperature(cfg);
  const TunedParams tuned = tune(cfg.system, temp);
  const RungSpectrum rungs = rung_spectrum(tuned);

  auto dump = [&](const EigenSystem& sys, const std::string& name,
                  const std::string& states) {
    const int n = static_cast<int>(sys.values.size());
    MatrixXd table(n, 3 + n);
    std::vector<std::string> cols = {"level", "re_mueV", "im_mueV"};
    for (int q = 0; q < n; ++q) cols.push_back("w_state" + std::to_string(q));
    for (int k = 0; k < n; ++k) {
      table(k, 0) = k;
      table(k, 1) = sys.values(k).real();
      table(k, 2) = sys.values(k).imag();
      for (int q = 0; q < n; ++q) table(k, 3 + q) = std::norm(sys.right(q, k));
    }
    io::write_csv_table(join(opt.out_dir, name),
                        {"complex eigenvalues (mueV) and probability weights",
                         "temperature_K = " + std::to_string(temp),
                         "state order: " + states},
                        cols, table);
  };
  dump(rungs.rung1, "levels_rung1.csv", "cavity photon; excitons 1..N");
  dump(rungs.rung2, "levels_rung2.csv",
       "two photons; photon+exciton 1..N; exciton pairs (n<m) lexicographic");
  std::cout << "levels: rung1 " << rungs.rung1.values.size() << " states, rung2 "
            << rungs.rung2.values.size() << " states, T = " << temp << " K\n";
  return 0;
}

int cmd_fwm(const CommonOpts& opt) {
  const RunConfig cfg = resolve(opt);
  const double temp = working_temperature(cfg);
  const TunedParams tuned = tune(cfg.system, temp);
  const ResponseCoefficients coeffs = response_coefficients(tuned);

  const VectorXd t_grid = cfg.t_grid.build();
  const VectorXd tau_grid = cfg.tau_grid.build();
  const VectorXd omega = omega_grid_for(cfg, coeffs);

  const FwmSignal sig = fwm_time_map(coeffs, t_grid, tau_grid);
  Eigen::MatrixXcd spec(omega.size(), tau_grid.size());
  for (int c = 0; c < tau_grid.size(); ++c)
    spec.col(c) = fwm_spectrum(coeffs, omega, tau_grid(c));
  const VectorXd power = time_integrated_power(coeffs, tau_grid);

  if (cfg.format == "json") {
    io::write_json(join(opt.out_dir, "fwm_time_map.json"), io::signal_to_json(sig));
  } else {
    io::write_csv_map(join(opt.out_dir, "fwm_time_map.csv"),
                      {"|P(t,tau)|^2, rotating frame ref " +
                           std::to_string(coeffs.ref_energy) + " mueV"},
                      "t_ps", t_grid, "tau_ps", tau_grid, power_map(sig.values));
  }
  io::write_csv_map(join(opt.out_dir, "fwm_spectrum_map.csv"),
                    {"|P~(omega,tau)|^2, absolute energies"}, "omega_mueV", omega,
                    "tau_ps", tau_grid, power_map(spec));
  MatrixXd ptab(tau_grid.size(), 2);
  ptab.col(0) = tau_grid;
  ptab.col(1) = power;
  io::write_csv_table(join(opt.out_dir, "fwm_integrated_power.csv"),
                      {"time-integrated FWM power vs delay"},
                      {"tau_ps", "power_au"}, ptab);
  std::cout << "fwm: T = " << temp << " K, " << t_grid.size() << "x"
            << tau_grid.size() << " time map written\n";
  return 0;
}

int cmd_fwm2d(const CommonOpts& opt) {
  const RunConfig cfg = resolve(opt);
  const double temp = working_temperature(cfg);
  const TunedParams tuned = tune(cfg.system, temp);
  const ResponseCoefficients coeffs = response_coefficients(tuned);

  const VectorXd omega = omega_grid_for(cfg, coeffs);
  const VectorXd t_grid = cfg.t_grid.build();
  const VectorXd tau_grid = cfg.tau_grid.build();

  const Fwm2D closed = fwm_2d(coeffs, omega, omega, 0.0);
  const Fwm2D selected = fwm_2d(coeffs, omega, omega, cfg.t_s);

  // Sampled analysis chain on positive delays, optional phase correction.
  const FwmSignal sig = fwm_time_map(coeffs, t_grid, tau_grid);
  SpectralMap map = ft_time_to_omega(sig, omega, coeffs.gamma_s);
  if (cfg.omega_cor) map = phase_correct(map, *cfg.omega_cor);
  const Fwm2D sampled = ft_tau_to_omega_tau(map, omega, true);

  io::write_csv_map(join(opt.out_dir, "fwm2d_closed.csv"),
                    {"|P(omega,omega_tau)|^2, closed form, t_s = 0"},
                    "omega_mueV", omega, "omega_tau_mueV", omega,
                    power_map(closed.values));
  io::write_csv_map(join(opt.out_dir, "fwm2d_postselected.csv"),
                    {"|P(omega,omega_tau)|^2, closed form, t_s = " +
                         std::to_string(cfg.t_s) + " ps"},
                    "omega_mueV", omega, "omega_tau_mueV", omega,
                    power_map(selected.values));
  io::write_csv_map(join(opt.out_dir, "fwm2d_sampled.csv"),
                    {"|P(omega,omega_tau)|^2, sampled FT chain",
                     std::string("phase_corrected = ") +
                         (sampled.phase_corrected ? "true" : "false")},
                    "omega_mueV", omega, "omega_tau_mueV", omega,
                    power_map(sampled.values));
  if (cfg.format == "json")
    io::write_json(join(opt.out_dir, "fwm2d_meta.json"),
                   {{"omega_tau_flipped", sampled.omega_tau_flipped},
                    {"phase_corrected", sampled.phase_corrected},
                    {"survival_time_ps", cfg.t_s},
                    {"temperature_K", temp}});
  std::cout << "fwm2d: T = " << temp << " K, t_s = " << cfg.t_s
            << " ps, phase_corrected = " << (sampled.phase_corrected ? 1 : 0)
            << "\n";
  return 0;
}

int cmd_fit(const CommonOpts& opt, const std::vector<std::string>& pl_files) {
  const RunConfig cfg = resolve(opt);
  if (pl_files.empty()) throw ConfigError("fit: no PL spectra given");
  std::vector<PlLineSet> data;
  for (const auto& path : pl_files) {
    const PlSpectrum spec = io::read_pl_csv(path);
    const LorentzianFit fit =
        fit_lorentzians(spec, cfg.system.n_emitters + 1);
    data.push_back({spec.temperature, fit.peaks});
  }
  const FitResult result = global_fit(data, cfg.system);
  io::write_json(join(opt.out_dir, "fit_result.json"),
                 io::fit_result_to_json(result));
  std::cout << "fit: " << data.size() << " spectra, residual "
            << result.residual_norm
            << (result.converged ? ", converged" : ", NOT converged") << "\n";
  return result.converged ? 0 : 4;
}

int cmd_verify(const CommonOpts& opt, bool inject_error) {
  const RunConfig cfg = resolve(opt);
  const double temp = working_temperature(cfg);
  const TunedParams tuned = tune(cfg.system, temp);
  ResponseCoefficients coeffs = response_coefficients(tuned);
  if (inject_error) coeffs.a_coef(0, 0) += 0.05;

  bool ok = true;
  auto report = [&](const std::string& name, double err, double tol) {
    const bool pass = err <= tol;
    ok = ok && pass;
    std::cout << (pass ? "PASS " : "FAIL ") << name << "  err = " << err
              << "  tol = " << tol << "\n";
  };

  // Analytic vs ODE master equation.
  const TunedParams frame = tuned.shifted(coeffs.ref_energy);
  VectorXd t_grid = GridSpec{0.0, 50.0, 0.5}.build();
  double worst = 0.0;
  for (double tau : {-10.0, 0.0, 10.0}) {
    const VectorXcd ode = fwm_via_ode(frame, coeffs.pulses, t_grid, tau);
    double scale = 0.0;
    for (int i = 0; i < t_grid.size(); ++i) scale = std::max(scale, std::abs(ode(i)));
    for (int i = 0; i < t_grid.size(); ++i)
      worst = std::max(worst, std::abs(fwm_polarization(coeffs, t_grid(i), tau) -
                                       ode(i)) / scale);
  }
  report("analytic vs ODE master equation", worst, 1e-6);

  // Null response at g = 0.
  SystemParams null_sys = cfg.system;
  for (double& g : null_sys.g) g = 0.0;
  const ResponseCoefficients null_coeffs =
      response_coefficients(tune(null_sys, temp));
  double null_peak = 0.0;
  double ref_peak = 0.0;
  for (int i = 0; i < t_grid.size(); ++i)
    for (double tau : {-10.0, 5.0}) {
      null_peak = std::max(null_peak,
                           std::abs(fwm_polarization(null_coeffs, t_grid(i), tau)));
      ref_peak =
          std::max(ref_peak, std::abs(fwm_polarization(coeffs, t_grid(i), tau)));
    }
  report("null response at g = 0", null_peak / ref_peak, 1e-12);

  // Rung spectra vs characteristic-polynomial roots.
  const RungSpectrum rungs = rung_spectrum(frame);
  const auto roots1 = charpoly_eigenvalues(build_h1(frame));
  const auto roots2 = charpoly_eigenvalues(build_h2(frame));
  double eig_err = 0.0;
  for (int k = 0; k < rungs.lambda1().size(); ++k)
    eig_err = std::max(eig_err,
                       std::abs(rungs.lambda1()(k) - roots1[static_cast<std::size_t>(k)]));
  for (int k = 0; k < rungs.lambda2().size(); ++k)
    eig_err = std::max(eig_err,
                       std::abs(rungs.lambda2()(k) - roots2[static_cast<std::size_t>(k)]));
  report("rung spectra vs charpoly roots", eig_err, 1e-9);

  // Integrated power: closed form vs quadrature on a dense grid.
  VectorXd tau_pts(3);
  tau_pts << -8.0, 1.0, 12.0;
  const VectorXd closed = time_integrated_power(coeffs, tau_pts);
  const VectorXd tq = GridSpec{0.0, 400.0, 0.02}.build();
  double pow_err = 0.0;
  for (int c = 0; c < tau_pts.size(); ++c) {
    double acc = 0.0;
    for (int i = 0; i < tq.size(); ++i) {
      const double w = (i == 0 || i == tq.size() - 1) ? 0.5 : 1.0;
      acc += w * 0.02 * std::norm(fwm_polarization(coeffs, tq(i), tau_pts(c)));
    }
    pow_err = std::max(pow_err, std::abs(acc - closed(c)) / closed(c));
  }
  report("integrated power closed form vs quadrature", pow_err, 1e-6);

  if (!ok) throw NumericalError("verification failed");
  std::cout << "verify: all checks passed\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tavis-Cummings four-wave-mixing simulator"};
  app.require_subcommand(1);

  CommonOpts opt;
  std::vector<std::string> pl_files;
  bool inject_error = false;

  CLI::App* levels = app.add_subcommand("levels", "rung eigenvalues and weights");
  add_common(levels, opt);
  CLI::App* fwm = app.add_subcommand("fwm", "time-resolved FWM maps and spectra");
  add_common(fwm, opt);
  CLI::App* fwm2d = app.add_subcommand("fwm2d", "two-dimensional FWM spectra");
  add_common(fwm2d, opt);
  CLI::App* fit = app.add_subcommand("fit", "PL line fit and parameter recovery");
  add_common(fit, opt);
  fit->add_option("pl_files", pl_files, "PL spectra (CSV + .json sidecar)");
  CLI::App* verify = app.add_subcommand("verify", "run the oracle comparison suite");
  add_common(verify, opt);
  verify->add_flag("--inject-error", inject_error, "negative control")
      ->group("");  // hidden

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (levels->parsed()) return cmd_levels(opt);
    if (fwm->parsed()) return cmd_fwm(opt);
    if (fwm2d->parsed()) return cmd_fwm2d(opt);
    if (fit->parsed()) return cmd_fit(opt, pl_files);
    if (verify->parsed()) return cmd_verify(opt, inject_error);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
