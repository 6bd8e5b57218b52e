#pragma once

#include <cmath>
#include <cstdint>

#include "zsk/error.hpp"

namespace zsk {

/// Stopping rule shared by the reference oracles.
struct ToleranceConfig {
  double abs_tol = 1e-15;
  double rel_tol = 1e-15;
  std::int64_t max_terms = 100000;

  void validate() const {
    if (!(abs_tol > 0.0) || !std::isfinite(abs_tol)) throw domain_error("tolerance: abs_tol must be > 0");
    if (!(rel_tol >= 0.0) || !std::isfinite(rel_tol)) throw domain_error("tolerance: rel_tol must be >= 0");
    if (max_terms < 1) throw domain_error("tolerance: max_terms must be >= 1");
  }

  [[nodiscard]] bool met(double change, double scale) const {
    return std::fabs(change) <= abs_tol + rel_tol * std::fabs(scale);
  }
};

}  // namespace zsk
