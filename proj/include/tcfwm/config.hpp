#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "tcfwm/params.hpp"

namespace tcfwm {

using Eigen::VectorXd;

// Uniform grid description from a config document.
struct GridSpec {
  double start = 0.0;
  double stop = 0.0;
  double step = 0.0;

  VectorXd build() const {
    if (!(step > 0.0) || !(stop > start))
      throw ConfigError("grid: require stop > start and step > 0");
    const int n = static_cast<int>(std::floor((stop - start) / step + 0.5)) + 1;
    VectorXd g(n);
    for (int i = 0; i < n; ++i) g(i) = start + i * step;
    return g;
  }
};

// Full run description: the physical system plus the requested working
// point, grids and output options. All energies mueV, times ps,
// temperatures K.
struct RunConfig {
  int schema_version = 1;
  SystemParams system;
  std::optional<double> temperature;  // K; exactly one of temperature/delta
  std::optional<double> delta;        // target average detuning, mueV
  GridSpec t_grid{0.0, 200.0, 0.1};
  GridSpec tau_grid{-50.0, 100.0, 0.5};
  double omega_window = 300.0;  // mueV each side of the transition band
  double omega_step = 1.0;      // mueV
  double t_s = 0.0;             // ps, post-selection survival time
  std::optional<double> omega_cor;  // mueV, phase-correction frequency
  std::string format = "csv";       // csv | json
  int threads = 1;

  void validate() const {
    system.validate();
    if (temperature.has_value() == delta.has_value())
      throw ConfigError("run: specify exactly one of temperature or delta");
    if (temperature && *temperature < 0.0)
      throw ConfigError("run: temperature must be >= 0");
    if (t_s < 0.0) throw ConfigError("run: t_s must be >= 0");
    if (!(omega_window > 0.0) || !(omega_step > 0.0))
      throw ConfigError("run: omega window/step must be > 0");
    if (format != "csv" && format != "json")
      throw ConfigError("run: format must be csv or json");
    if (threads < 1) throw ConfigError("run: threads must be >= 1");
  }
};

namespace detail {

using nlohmann::json;

inline void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                           const std::string& where) {
  for (const auto& item : obj.items())
    if (!allowed.count(item.key()))
      throw ConfigError("config: unknown key \"" + item.key() + "\" in " + where);
}

inline GridSpec parse_grid(const json& obj, const std::string& where) {
  if (!obj.is_object()) throw ConfigError("config: " + where + " must be an object");
  reject_unknown(obj, {"start", "stop", "step"}, where);
  GridSpec g;
  g.start = obj.at("start").get<double>();
  g.stop = obj.at("stop").get<double>();
  g.step = obj.at("step").get<double>();
  return g;
}

}  // namespace detail

inline RunConfig parse_config(const nlohmann::json& doc) {
  using nlohmann::json;
  if (!doc.is_object()) throw ConfigError("config: document must be a JSON object");
  detail::reject_unknown(doc, {"schema_version", "system", "run"}, "document root");

  RunConfig cfg;
  cfg.schema_version = doc.value("schema_version", 1);
  if (cfg.schema_version != 1)
    throw ConfigError("config: unsupported schema_version " +
                      std::to_string(cfg.schema_version));

  const json& sys = doc.at("system");
  detail::reject_unknown(sys,
                         {"n_emitters", "omega_x0", "omega_c0", "g", "gamma_x",
                          "gamma_c", "gamma_s", "temperature_model"},
                         "system");
  cfg.system.n_emitters = sys.at("n_emitters").get<int>();
  cfg.system.omega_x0 = sys.at("omega_x0").get<std::vector<double>>();
  cfg.system.omega_c0 = sys.at("omega_c0").get<double>();
  cfg.system.g = sys.at("g").get<std::vector<double>>();
  cfg.system.gamma_x = sys.at("gamma_x").get<std::vector<double>>();
  cfg.system.gamma_c = sys.at("gamma_c").get<double>();
  cfg.system.gamma_s = sys.value("gamma_s", 0.0);
  if (sys.contains("temperature_model")) {
    const json& tm = sys.at("temperature_model");
    detail::reject_unknown(tm, {"alpha", "theta", "eta"}, "temperature_model");
    cfg.system.temp_model.alpha = tm.at("alpha").get<double>();
    cfg.system.temp_model.theta = tm.at("theta").get<double>();
    cfg.system.temp_model.eta = tm.at("eta").get<double>();
  }

  if (doc.contains("run")) {
    const json& run = doc.at("run");
    detail::reject_unknown(run,
                           {"temperature", "delta", "t_grid", "tau_grid",
                            "omega_window", "omega_step", "t_s", "omega_cor",
                            "format", "threads"},
                           "run");
    if (run.contains("temperature")) cfg.temperature = run.at("temperature").get<double>();
    if (run.contains("delta")) cfg.delta = run.at("delta").get<double>();
    if (run.contains("t_grid")) cfg.t_grid = detail::parse_grid(run.at("t_grid"), "t_grid");
    if (run.contains("tau_grid"))
      cfg.tau_grid = detail::parse_grid(run.at("tau_grid"), "tau_grid");
    cfg.omega_window = run.value("omega_window", cfg.omega_window);
    cfg.omega_step = run.value("omega_step", cfg.omega_step);
    cfg.t_s = run.value("t_s", cfg.t_s);
    if (run.contains("omega_cor")) cfg.omega_cor = run.at("omega_cor").get<double>();
    cfg.format = run.value("format", cfg.format);
    cfg.threads = run.value("threads", cfg.threads);
  }
  if (!cfg.temperature && !cfg.delta) cfg.temperature = 19.0;
  cfg.validate();
  return cfg;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config: JSON parse error in " + path + ": " + e.what());
  }
  try {
    return parse_config(doc);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config: schema error in " + path + ": " + e.what());
  }
}

}  // namespace tcfwm
