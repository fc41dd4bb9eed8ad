#pragma once

#include <stdexcept>
#include <string>

namespace wbsw {

/// Raised for invalid user-facing configuration (bad parameters, unknown
/// scenario ids, unsupported combinations).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when the time integration cannot continue (time-step underflow,
/// admissibility lost after repair).
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Physical constants and numerical knobs shared by every module.
struct SchemeConfig {
  double g = 9.812;               // m/s^2
  double manning_n = 0.0;         // s/m^{1/3}
  double cfl = 0.4;
  double eps_desing = 1e-9;       // desingularization and dry threshold
  double entropy_fix_eps = 0.05;  // fraction of the local max wave speed
  double switch_C = 6.0;
  int switch_m = 20;
  bool mood_enabled = true;

  void validate() const {
    if (!(g > 0.0)) throw ConfigError("g must be positive");
    if (!(manning_n >= 0.0)) throw ConfigError("manning_n must be nonnegative");
    if (!(cfl > 0.0 && cfl < 1.0)) throw ConfigError("cfl must lie in (0, 1)");
    if (!(eps_desing > 0.0)) throw ConfigError("eps_desing must be positive");
    if (!(entropy_fix_eps > 0.0)) throw ConfigError("entropy_fix_eps must be positive");
    if (!(switch_C > 0.0)) throw ConfigError("switch_C must be positive");
    if (switch_m <= 0 || switch_m % 2 != 0) throw ConfigError("switch_m must be a positive even integer");
  }
};

}  // namespace wbsw
