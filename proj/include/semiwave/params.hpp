#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace semiwave {

// Error taxonomy, mapped to process exit codes by the CLI:
//   invalid_config_error -> 2, numerical_abort_error -> 3, infeasible_error -> 4.
struct invalid_config_error : std::runtime_error {
  explicit invalid_config_error(const std::string& what) : std::runtime_error(what) {}
};

// c < 2 makes the characteristic roots complex; everything downstream needs them real.
struct subcritical_speed_error : invalid_config_error {
  explicit subcritical_speed_error(double c)
      : invalid_config_error("subcritical speed c = " + std::to_string(c) + " (need c >= 2)") {}
};

struct numerical_abort_error : std::runtime_error {
  explicit numerical_abort_error(const std::string& what) : std::runtime_error(what) {}
};

struct infeasible_error : std::runtime_error {
  explicit infeasible_error(const std::string& what) : std::runtime_error(what) {}
};

// The coordinate of every experiment: wave speed c > 0 and delay h >= 0.
struct Params {
  double c;
  double h;

  Params(double c_, double h_) : c(c_), h(h_) {
    if (!std::isfinite(c) || !(c > 0.0))
      throw invalid_config_error("wave speed c must be finite and > 0");
    if (!std::isfinite(h) || !(h < 1e6) || h < 0.0)
      throw invalid_config_error("delay h must be finite and >= 0");
  }

  double ch() const { return c * h; }
};

}  // namespace semiwave
