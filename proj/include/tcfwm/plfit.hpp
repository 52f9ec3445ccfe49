#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "tcfwm/detuning.hpp"
#include "tcfwm/lm.hpp"
#include "tcfwm/spectrum.hpp"

namespace tcfwm {

// One PL spectrum at a fixed temperature.
struct PlSpectrum {
  double temperature = 0.0;  // K
  VectorXd energy;           // mueV, strictly increasing
  VectorXd intensity;        // arbitrary units, >= 0

  void validate() const {
    if (energy.size() != intensity.size() || energy.size() < 3)
      throw ConfigError("pl spectrum: energy/intensity size mismatch or too short");
    for (int i = 1; i < energy.size(); ++i)
      if (!(energy(i) > energy(i - 1)))
        throw ConfigError("pl spectrum: energy grid must be strictly increasing");
    for (int i = 0; i < intensity.size(); ++i)
      if (!std::isfinite(intensity(i)) || intensity(i) < 0.0)
        throw ConfigError("pl spectrum: intensities must be finite and >= 0");
  }
};

struct LorentzianPeak {
  double center = 0.0;     // mueV
  double hwhm = 0.0;       // mueV
  double amplitude = 0.0;  // a.u., peak height
  double center_err = 0.0;
  double hwhm_err = 0.0;
  double amplitude_err = 0.0;
};

struct LorentzianFit {
  std::vector<LorentzianPeak> peaks;
  double background = 0.0;
  double residual_norm = 0.0;
  bool converged = false;
};

// Sum-of-Lorentzians decomposition: sum_k A_k hwhm_k^2/((E-E_k)^2+hwhm_k^2)
// plus a constant background. Initialization picks local maxima above
// `threshold` (relative to the global maximum).
inline LorentzianFit fit_lorentzians(const PlSpectrum& spectrum, int max_peaks,
                                     double threshold = 0.05) {
  spectrum.validate();
  if (max_peaks < 1) throw ConfigError("fit_lorentzians: max_peaks must be >= 1");
  const VectorXd& e = spectrum.energy;
  const VectorXd& y = spectrum.intensity;
  const double peak = y.maxCoeff();
  if (peak <= 0.0) throw ConfigError("fit_lorentzians: spectrum is identically zero");

  // Peak picking on a lightly smoothed copy (noise robustness): local
  // maxima above the relative threshold, strongest first, separated by a
  // minimum distance so noise bumps on one line count once.
  VectorXd smooth = y;
  for (int i = 2; i + 2 < y.size(); ++i)
    smooth(i) = (y(i - 2) + y(i - 1) + y(i) + y(i + 1) + y(i + 2)) / 5.0;
  const double span = e(e.size() - 1) - e(0);
  const double min_sep = span / (8.0 * max_peaks);
  std::vector<int> candidates;
  for (int i = 1; i + 1 < y.size(); ++i)
    if (smooth(i) >= smooth(i - 1) && smooth(i) > smooth(i + 1) &&
        smooth(i) >= threshold * peak)
      candidates.push_back(i);
  std::sort(candidates.begin(), candidates.end(),
            [&](int a, int b) { return smooth(a) > smooth(b); });
  std::vector<int> picks;
  for (int i : candidates) {
    if (static_cast<int>(picks.size()) >= max_peaks) break;
    bool clear = true;
    for (int p : picks)
      if (std::abs(e(i) - e(p)) < min_sep) clear = false;
    if (clear) picks.push_back(i);
  }
  if (picks.empty())
    picks.push_back(static_cast<int>(std::distance(
        y.data(), std::max_element(y.data(), y.data() + y.size()))));

  // Blended lines show fewer maxima than components: split the strongest
  // pick sideways until the requested component count is reached.
  const double width0 = std::max(span / 50.0, 1.0);
  std::vector<double> centers;
  for (int i : picks) centers.push_back(e(i));
  std::vector<double> heights;
  for (int i : picks) heights.push_back(y(i));
  for (int extra = 0; static_cast<int>(centers.size()) < max_peaks; ++extra) {
    const double off = (extra % 2 == 0 ? 1.0 : -1.0) * width0 * (1 + extra / 2);
    centers.push_back(centers[0] + off);
    heights.push_back(0.5 * heights[0]);
  }
  const int np = static_cast<int>(centers.size());

  // Parameter layout: [E_k, log(hwhm_k), log(A_k)] x np, background.
  VectorXd x(3 * np + 1);
  for (int k = 0; k < np; ++k) {
    x(3 * k) = centers[static_cast<std::size_t>(k)];
    x(3 * k + 1) = std::log(width0);
    x(3 * k + 2) = std::log(std::max(heights[static_cast<std::size_t>(k)],
                                     1e-6 * peak));
  }
  x(3 * np) = y.minCoeff();

  auto model = [&](const VectorXd& p, int i) {
    double v = p(3 * np);
    for (int k = 0; k < np; ++k) {
      const double hw = std::exp(p(3 * k + 1));
      const double d = e(i) - p(3 * k);
      v += std::exp(p(3 * k + 2)) * hw * hw / (d * d + hw * hw);
    }
    return v;
  };
  auto residual = [&](const VectorXd& p) {
    VectorXd r(e.size());
    for (int i = 0; i < e.size(); ++i) r(i) = model(p, i) - y(i);
    return r;
  };

  LmOptions opt;
  opt.max_iterations = 400;
  // Centers sit on an absolute energy axis; the residual varies on the
  // linewidth scale, so the Jacobian step must too.
  opt.scales = VectorXd::Ones(x.size());
  for (int k = 0; k < np; ++k) opt.scales(3 * k) = width0;
  opt.scales(3 * np) = std::max(1e-3 * peak, 1e-12);
  const LmResult lm = levenberg_marquardt(residual, x, opt);

  LorentzianFit fit;
  fit.converged = lm.converged;
  fit.residual_norm = lm.residual_norm;
  fit.background = lm.parameters(3 * np);
  for (int k = 0; k < np; ++k) {
    LorentzianPeak pk;
    pk.center = lm.parameters(3 * k);
    pk.hwhm = std::exp(lm.parameters(3 * k + 1));
    pk.amplitude = std::exp(lm.parameters(3 * k + 2));
    const auto var = [&](int idx) {
      const double v = lm.covariance(idx, idx);
      return std::isfinite(v) && v > 0.0 ? std::sqrt(v) : 0.0;
    };
    pk.center_err = var(3 * k);
    pk.hwhm_err = pk.hwhm * var(3 * k + 1);          // log-parameter delta rule
    pk.amplitude_err = pk.amplitude * var(3 * k + 2);
    fit.peaks.push_back(pk);
  }
  std::sort(fit.peaks.begin(), fit.peaks.end(),
            [](const LorentzianPeak& a, const LorentzianPeak& b) {
              return a.center < b.center;
            });
  return fit;
}

// Observable PL line for one first-rung polariton state.
struct PredictedLine {
  double center = 0.0;  // Re lambda_1k, mueV
  double hwhm = 0.0;    // -Im lambda_1k + gamma_s, mueV
};

inline std::vector<PredictedLine> predicted_lines(const SystemParams& params,
                                                  double temperature) {
  const TunedParams tuned = tune(params, temperature);
  const EigenSystem rung1 = eigendecompose(build_h1(tuned));
  std::vector<PredictedLine> lines;
  lines.reserve(static_cast<std::size_t>(rung1.values.size()));
  for (int k = 0; k < rung1.values.size(); ++k)
    lines.push_back({rung1.values(k).real(),
                     -rung1.values(k).imag() + params.gamma_s});
  std::sort(lines.begin(), lines.end(),
            [](const PredictedLine& a, const PredictedLine& b) {
              return a.center < b.center;
            });
  return lines;
}

// Measured line positions/widths at one temperature (outputs of
// fit_lorentzians, widths still including the spectrometer resolution).
struct PlLineSet {
  double temperature = 0.0;
  std::vector<LorentzianPeak> peaks;
};

struct FitResult {
  SystemParams params;
  VectorXd uncertainties;  // same layout as the fitted parameter vector
  double residual_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<std::string> warnings;
};

// Stage-1 fit of the band-gap model: detuned-dot line positions E(T) follow
// E(T) = E0 + F(T); recovers (E0, alpha, theta) from one temperature track.
struct TemperatureModelFit {
  double e0 = 0.0;
  double alpha = 0.0;
  double theta = 0.0;
  double alpha_err = 0.0;
  double theta_err = 0.0;
  bool converged = false;
};

inline TemperatureModelFit fit_temperature_model(const VectorXd& temperatures,
                                                 const VectorXd& energies,
                                                 double alpha0 = 50.0,
                                                 double theta0 = 50.0) {
  if (temperatures.size() != energies.size() || temperatures.size() < 3)
    throw ConfigError("fit_temperature_model: need >= 3 (T, E) samples");
  auto residual = [&](const VectorXd& p) {
    TemperatureModel model{std::abs(p(1)), std::abs(p(2)), 0.0};
    VectorXd r(temperatures.size());
    for (int i = 0; i < temperatures.size(); ++i)
      r(i) = p(0) + band_gap_shift(model, temperatures(i)) - energies(i);
    return r;
  };
  VectorXd x(3);
  x << energies(0), alpha0, theta0;
  const LmResult lm = levenberg_marquardt(residual, x);
  TemperatureModelFit fit;
  fit.e0 = lm.parameters(0);
  fit.alpha = std::abs(lm.parameters(1));
  fit.theta = std::abs(lm.parameters(2));
  fit.alpha_err = std::sqrt(std::max(0.0, lm.covariance(1, 1)));
  fit.theta_err = std::sqrt(std::max(0.0, lm.covariance(2, 2)));
  fit.converged = lm.converged;
  return fit;
}

namespace detail {

// Nearest-neighbour assignment of measured peaks to predicted branches at
// one temperature: each measured peak takes the closest branch in energy
// (branches may be shared only when there are more peaks than branches).
inline std::vector<int> assign_branches(const std::vector<LorentzianPeak>& peaks,
                                        const std::vector<PredictedLine>& lines) {
  std::vector<int> assign(peaks.size(), -1);
  std::vector<bool> used(lines.size(), false);
  // Greedy by smallest distance, one branch per peak first.
  std::vector<std::pair<double, std::pair<int, int>>> dist;
  for (std::size_t p = 0; p < peaks.size(); ++p)
    for (std::size_t l = 0; l < lines.size(); ++l)
      dist.push_back({std::abs(peaks[p].center - lines[l].center),
                      {static_cast<int>(p), static_cast<int>(l)}});
  std::sort(dist.begin(), dist.end());
  for (const auto& d : dist) {
    const int p = d.second.first;
    const int l = d.second.second;
    if (assign[static_cast<std::size_t>(p)] >= 0 || used[static_cast<std::size_t>(l)]) continue;
    assign[static_cast<std::size_t>(p)] = l;
    used[static_cast<std::size_t>(l)] = true;
  }
  for (std::size_t p = 0; p < peaks.size(); ++p)
    if (assign[p] < 0) {
      int best = 0;
      for (std::size_t l = 1; l < lines.size(); ++l)
        if (std::abs(peaks[p].center - lines[l].center) <
            std::abs(peaks[p].center - lines[static_cast<std::size_t>(best)].center))
          best = static_cast<int>(l);
      assign[p] = best;
    }
  return assign;
}

}  // namespace detail

// Stage-2 global fit of {omega_xn(0), omega_c(0), g_n, gamma_xn, gamma_c,
// eta} to measured line positions and widths across temperatures, with
// (alpha, theta, gamma_s) held fixed. Width residuals are scaled so 1 mueV
// of width counts like 1 mueV of position.
inline FitResult global_fit(const std::vector<PlLineSet>& data,
                            const SystemParams& initial) {
  initial.validate();
  if (data.size() < 2) throw ConfigError("global_fit: need >= 2 temperatures");
  const int n = initial.n_emitters;
  const int npar = 3 * n + 3;  // omega_x0 x n, omega_c0, g x n, gamma_x x n, gamma_c, eta

  auto unpack = [&](const VectorXd& p) {
    SystemParams s = initial;
    for (int k = 0; k < n; ++k) s.omega_x0[static_cast<std::size_t>(k)] = p(k);
    s.omega_c0 = p(n);
    for (int k = 0; k < n; ++k) s.g[static_cast<std::size_t>(k)] = std::abs(p(n + 1 + k));
    for (int k = 0; k < n; ++k)
      s.gamma_x[static_cast<std::size_t>(k)] = std::abs(p(2 * n + 1 + k));
    s.gamma_c = std::abs(p(3 * n + 1));
    s.temp_model.eta = std::clamp(p(3 * n + 2), 0.0, 1.0);
    return s;
  };

  std::size_t n_res = 0;
  for (const auto& set : data) n_res += 2 * set.peaks.size();

  auto residual = [&](const VectorXd& p) {
    const SystemParams s = unpack(p);
    VectorXd r(static_cast<int>(n_res));
    int idx = 0;
    for (const auto& set : data) {
      const auto lines = predicted_lines(s, set.temperature);
      const auto assign = detail::assign_branches(set.peaks, lines);
      for (std::size_t q = 0; q < set.peaks.size(); ++q) {
        const auto& line = lines[static_cast<std::size_t>(assign[q])];
        r(idx++) = line.center - set.peaks[q].center;
        r(idx++) = line.hwhm - set.peaks[q].hwhm;
      }
    }
    return r;
  };

  VectorXd x(npar);
  for (int k = 0; k < n; ++k) x(k) = initial.omega_x0[static_cast<std::size_t>(k)];
  x(n) = initial.omega_c0;
  for (int k = 0; k < n; ++k) x(n + 1 + k) = initial.g[static_cast<std::size_t>(k)];
  for (int k = 0; k < n; ++k) x(2 * n + 1 + k) = initial.gamma_x[static_cast<std::size_t>(k)];
  x(3 * n + 1) = initial.gamma_c;
  x(3 * n + 2) = initial.temp_model.eta;

  LmOptions opt;
  opt.max_iterations = 300;
  // Energy origins are ~1e6 on the same axis as few-ueV line splittings.
  opt.scales = VectorXd::Ones(npar);
  for (int k = 0; k <= n; ++k) opt.scales(k) = 1.0;
  for (int k = n + 1; k < 3 * n + 2; ++k)
    opt.scales(k) = std::max(1.0, std::abs(x(k)));
  opt.scales(3 * n + 2) = 0.05;
  const LmResult lm = levenberg_marquardt(residual, x, opt);

  FitResult out;
  out.params = unpack(lm.parameters);
  out.residual_norm = lm.residual_norm;
  out.iterations = lm.iterations;
  out.converged = lm.converged;
  out.uncertainties.resize(npar);
  for (int k = 0; k < npar; ++k) {
    const double v = lm.covariance(k, k);
    out.uncertainties(k) = std::isfinite(v) && v > 0.0 ? std::sqrt(v) : 0.0;
  }
  // Identifiability note: purely detuned branches never anticross, leaving
  // the associated gamma poorly constrained.
  for (int k = 0; k < n; ++k)
    if (out.uncertainties(2 * n + 1 + k) > 5.0)
      out.warnings.push_back("gamma_x" + std::to_string(k + 1) +
                             " weakly constrained (no resolved anticrossing)");
  return out;
}

}  // namespace tcfwm
