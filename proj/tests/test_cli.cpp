#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "reference_params.hpp"
#include "tcfwm/plfit.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int code = -1;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(TCFWM_CLI_PATH) + " " + args +
                          " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return {WEXITSTATUS(status)};
}

fs::path make_workdir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("tcfwm_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// Small-grid config so CLI tests stay fast.
void write_small_config(const fs::path& path, bool zero_coupling = false) {
  std::ofstream out(path);
  out << R"({
  "schema_version": 1,
  "system": {
    "n_emitters": 3,
    "omega_x0": [1334610.6, 1334741.2, 1334858.4],
    "omega_c0": 1334573.2,
    "g": )" << (zero_coupling ? "[0.0, 0.0, 0.0]" : "[43.0, 40.0, 31.5]") << R"(,
    "gamma_x": [18.0, 11.5, 16.0],
    "gamma_c": 36.5,
    "gamma_s": 4.0,
    "temperature_model": {"alpha": 60.9, "theta": 58.9, "eta": 0.227}
  },
  "run": {
    "temperature": 19.0,
    "t_grid": {"start": 0.0, "stop": 40.0, "step": 0.5},
    "tau_grid": {"start": -10.0, "stop": 20.0, "step": 1.0},
    "omega_window": 100.0,
    "omega_step": 5.0,
    "t_s": 10.0
  }
})";
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int count_data_rows(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  int rows = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    ++rows;
  }
  return rows;
}

}  // namespace

TEST_CASE("levels writes 4 + 7 eigenvalue rows", "[cli]") {
  const fs::path dir = make_workdir("levels");
  const fs::path cfg = dir / "config.json";
  write_small_config(cfg);
  const RunResult r =
      run_cli("levels --config " + cfg.string() + " --out " + dir.string());
  CHECK(r.code == 0);
  CHECK(count_data_rows(dir / "levels_rung1.csv") == 4);
  CHECK(count_data_rows(dir / "levels_rung2.csv") == 7);
}

TEST_CASE("levels probability weights sum to one", "[cli]") {
  const fs::path dir = make_workdir("weights");
  const fs::path cfg = dir / "config.json";
  write_small_config(cfg);
  REQUIRE(run_cli("levels --config " + cfg.string() + " --out " + dir.string())
              .code == 0);
  std::ifstream in(dir / "levels_rung1.csv");
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line[0] == 'l') continue;
    std::istringstream ls(line);
    std::string cell;
    std::vector<double> vals;
    while (std::getline(ls, cell, ',')) vals.push_back(std::stod(cell));
    REQUIRE(vals.size() == 7);
    double sum = 0.0;
    for (std::size_t q = 3; q < vals.size(); ++q) sum += vals[q];
    CHECK(std::abs(sum - 1.0) < 1e-8);
  }
}

TEST_CASE("config errors exit with code 2", "[cli]") {
  const fs::path dir = make_workdir("badcfg");
  CHECK(run_cli("levels --config /nonexistent.json --out " + dir.string()).code == 2);
  const fs::path cfg = dir / "config.json";
  std::ofstream(cfg) << R"({"schema_version": 1, "system": {"n_emitters": 1}, "bogus": 1})";
  CHECK(run_cli("levels --config " + cfg.string() + " --out " + dir.string()).code == 2);
  CHECK(run_cli("frobnicate").code == 2);
}

TEST_CASE("fwm outputs exist and reruns are byte-identical", "[cli]") {
  const fs::path dir = make_workdir("fwm");
  const fs::path cfg = dir / "config.json";
  write_small_config(cfg);
  const std::string base = "fwm --config " + cfg.string() + " --out ";
  REQUIRE(run_cli(base + (dir / "a").string()).code == 0);
  REQUIRE(run_cli(base + (dir / "b").string()).code == 0);
  for (const char* name :
       {"fwm_time_map.csv", "fwm_spectrum_map.csv", "fwm_integrated_power.csv"}) {
    CAPTURE(name);
    const std::string a = slurp(dir / "a" / name);
    REQUIRE(!a.empty());
    CHECK(a == slurp(dir / "b" / name));
  }
}

TEST_CASE("zero-coupling config produces all-zero maps", "[cli]") {
  const fs::path dir = make_workdir("null");
  const fs::path cfg = dir / "config.json";
  write_small_config(cfg, true);
  REQUIRE(run_cli("fwm --config " + cfg.string() + " --out " + dir.string()).code == 0);
  std::ifstream in(dir / "fwm_integrated_power.csv");
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    const double power = std::stod(line.substr(line.find(',') + 1));
    CHECK(std::abs(power) < 1e-18);
  }
}

TEST_CASE("fwm2d runs the full chain with phase correction", "[cli]") {
  const fs::path dir = make_workdir("fwm2d");
  const fs::path cfg = dir / "config.json";
  write_small_config(cfg);
  const RunResult r = run_cli("fwm2d --config " + cfg.string() + " --out " +
                              dir.string() +
                              " --omega-cor 1334530 --format json --threads 2");
  CHECK(r.code == 0);
  CHECK(fs::exists(dir / "fwm2d_closed.csv"));
  CHECK(fs::exists(dir / "fwm2d_postselected.csv"));
  CHECK(fs::exists(dir / "fwm2d_sampled.csv"));
  const auto meta = nlohmann::json::parse(slurp(dir / "fwm2d_meta.json"));
  CHECK(meta.at("phase_corrected").get<bool>());
  CHECK(meta.at("omega_tau_flipped").get<bool>());
  CHECK(meta.at("survival_time_ps").get<double>() == 10.0);
}

TEST_CASE("verify passes and the negative control fails", "[cli]") {
  const fs::path dir = make_workdir("verify");
  const fs::path cfg = dir / "config.json";
  write_small_config(cfg);
  CHECK(run_cli("verify --config " + cfg.string() + " --out " + dir.string()).code == 0);
  CHECK(run_cli("verify --config " + cfg.string() + " --out " + dir.string() +
                " --inject-error").code == 3);
}

TEST_CASE("fit: synthetic round trip and malformed input", "[cli]") {
  const fs::path dir = make_workdir("fit");
  const fs::path cfg = dir / "config.json";
  write_small_config(cfg);

  // Synthesize PL spectra from the reference system at two temperatures.
  std::vector<std::string> files;
  for (double temp : {14.0, 19.0, 24.0}) {
    const auto lines = tcfwm::predicted_lines(reference_params(), temp);
    const fs::path csv = dir / ("pl_" + std::to_string(static_cast<int>(temp)) + ".csv");
    std::ofstream out(csv);
    out << "energy_mueV,intensity\n";
    for (int i = 0; i < 3000; ++i) {
      const double e = lines.front().center - 300.0 + 0.3 * i;
      double v = 0.0;
      for (const auto& l : lines)
        v += l.hwhm * l.hwhm / ((e - l.center) * (e - l.center) + l.hwhm * l.hwhm);
      out << std::setprecision(15) << e << "," << v << "\n";
    }
    std::ofstream(csv.string() + ".json") << "{\"temperature_K\": " << temp << "}";
    files.push_back(csv.string());
  }
  std::string args = "fit --config " + cfg.string() + " --out " + dir.string();
  for (const auto& f : files) args += " " + f;
  const RunResult r = run_cli(args);
  CHECK(r.code == 0);
  const auto doc = nlohmann::json::parse(slurp(dir / "fit_result.json"));
  CHECK(doc.at("params").at("n_emitters").get<int>() == 3);
  const auto g = doc.at("params").at("g").get<std::vector<double>>();
  REQUIRE(g.size() == 3);
  CHECK(std::abs(g[0] - 43.0) < 2.0);

  // Malformed CSV: exit 2.
  const fs::path bad = dir / "bad.csv";
  std::ofstream(bad) << "energy\n1,2,3\nnot,numbers\n";
  std::ofstream(bad.string() + ".json") << "{\"temperature_K\": 19.0}";
  CHECK(run_cli("fit --config " + cfg.string() + " --out " + dir.string() + " " +
                bad.string()).code == 2);
}
