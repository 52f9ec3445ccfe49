#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace tcfwm {

using Complex = std::complex<double>;

// hbar in mueV*ps; all energies are mueV, all times ps, phases are E*t/kHbar.
inline constexpr double kHbar = 658.2119569;

inline constexpr Complex kI{0.0, 1.0};

// Invalid input: bad parameters, malformed config, grids out of range.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure: ill-conditioned diagonalization, integrator breakdown,
// unreachable solver targets.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace tcfwm
