#pragma once

#include <Eigen/Dense>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tcfwm/plfit.hpp"
#include "tcfwm/response.hpp"
#include "tcfwm/signal.hpp"

namespace tcfwm {

namespace io {

inline std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("io: cannot open " + path + " for writing");
  out << std::setprecision(17);
  return out;
}

// Column-oriented CSV table: header comments, one header row, row-major data.
inline void write_csv_table(const std::string& path,
                            const std::vector<std::string>& comments,
                            const std::vector<std::string>& columns,
                            const MatrixXd& data) {
  if (static_cast<int>(columns.size()) != data.cols())
    throw ConfigError("io: column count mismatch");
  auto out = open_out(path);
  for (const auto& c : comments) out << "# " << c << "\n";
  for (std::size_t i = 0; i < columns.size(); ++i)
    out << (i ? "," : "") << columns[i];
  out << "\n";
  for (int r = 0; r < data.rows(); ++r) {
    for (int c = 0; c < data.cols(); ++c) out << (c ? "," : "") << data(r, c);
    out << "\n";
  }
}

// Real 2D map as CSV: first row the column axis, first column the row axis.
inline void write_csv_map(const std::string& path,
                          const std::vector<std::string>& comments,
                          const std::string& row_axis, const VectorXd& rows,
                          const std::string& col_axis, const VectorXd& cols,
                          const MatrixXd& values) {
  if (values.rows() != rows.size() || values.cols() != cols.size())
    throw ConfigError("io: map dimensions do not match axes");
  auto out = open_out(path);
  for (const auto& c : comments) out << "# " << c << "\n";
  out << "# rows: " << row_axis << "; columns: " << col_axis << "\n";
  out << row_axis << "\\" << col_axis;
  for (int c = 0; c < cols.size(); ++c) out << "," << cols(c);
  out << "\n";
  for (int r = 0; r < rows.size(); ++r) {
    out << rows(r);
    for (int c = 0; c < cols.size(); ++c) out << "," << values(r, c);
    out << "\n";
  }
}

inline nlohmann::json complex_to_json(const Complex& z) {
  return {{"re", z.real()}, {"im", z.imag()}};
}

inline nlohmann::json matrix_to_json(const Eigen::MatrixXcd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (int r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(row);
  }
  return rows;
}

inline nlohmann::json vector_to_json(const VectorXd& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

inline void write_json(const std::string& path, const nlohmann::json& doc) {
  auto out = open_out(path);
  out << doc.dump(2) << "\n";
}

inline nlohmann::json signal_to_json(const FwmSignal& sig) {
  return {{"t_grid_ps", vector_to_json(sig.t_grid)},
          {"tau_grid_ps", vector_to_json(sig.tau_grid)},
          {"ref_energy_mueV", sig.ref_energy},
          {"survival_time_ps", sig.survival_time},
          {"provenance", sig.provenance},
          {"values", matrix_to_json(sig.values)}};
}

inline nlohmann::json map2d_to_json(const Fwm2D& map) {
  return {{"omega_grid_mueV", vector_to_json(map.omega_grid)},
          {"omega_tau_grid_mueV", vector_to_json(map.omega_tau_grid)},
          {"gamma_s_mueV", map.gamma_s},
          {"survival_time_ps", map.survival_time},
          {"omega_tau_flipped", map.omega_tau_flipped},
          {"phase_corrected", map.phase_corrected},
          {"values", matrix_to_json(map.values)}};
}

inline nlohmann::json fit_result_to_json(const FitResult& fit) {
  nlohmann::json doc;
  doc["converged"] = fit.converged;
  doc["iterations"] = fit.iterations;
  doc["residual_norm"] = fit.residual_norm;
  doc["params"] = {{"n_emitters", fit.params.n_emitters},
                   {"omega_x0", fit.params.omega_x0},
                   {"omega_c0", fit.params.omega_c0},
                   {"g", fit.params.g},
                   {"gamma_x", fit.params.gamma_x},
                   {"gamma_c", fit.params.gamma_c},
                   {"gamma_s", fit.params.gamma_s},
                   {"temperature_model",
                    {{"alpha", fit.params.temp_model.alpha},
                     {"theta", fit.params.temp_model.theta},
                     {"eta", fit.params.temp_model.eta}}}};
  doc["uncertainties"] = vector_to_json(fit.uncertainties);
  doc["warnings"] = fit.warnings;
  doc["width_convention"] = "HWHM";
  return doc;
}

// PL spectra: CSV with columns energy_mueV,intensity and a JSON sidecar
// {"temperature_K": ...} (or the temperature given explicitly).
inline PlSpectrum read_pl_csv(const std::string& path, double temperature) {
  std::ifstream in(path);
  if (!in) throw ConfigError("io: cannot open " + path);
  std::vector<double> e;
  std::vector<double> y;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string a;
    std::string b;
    if (!std::getline(ls, a, ',') || !std::getline(ls, b))
      throw ConfigError("io: malformed PL CSV row in " + path + ": " + line);
    try {
      e.push_back(std::stod(a));
      y.push_back(std::stod(b));
    } catch (const std::exception&) {
      if (header_seen)
        throw ConfigError("io: non-numeric PL CSV row in " + path + ": " + line);
      header_seen = true;  // a single header row is allowed
    }
  }
  PlSpectrum spec;
  spec.temperature = temperature;
  spec.energy = Eigen::Map<const VectorXd>(e.data(), static_cast<int>(e.size()));
  spec.intensity = Eigen::Map<const VectorXd>(y.data(), static_cast<int>(y.size()));
  spec.validate();
  return spec;
}

inline PlSpectrum read_pl_csv(const std::string& path) {
  const std::string sidecar = path + ".json";
  std::ifstream in(sidecar);
  if (!in) throw ConfigError("io: missing temperature sidecar " + sidecar);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("io: bad sidecar " + sidecar + ": " + e.what());
  }
  if (!doc.contains("temperature_K"))
    throw ConfigError("io: sidecar " + sidecar + " lacks temperature_K");
  return read_pl_csv(path, doc.at("temperature_K").get<double>());
}

}  // namespace io

}  // namespace tcfwm
