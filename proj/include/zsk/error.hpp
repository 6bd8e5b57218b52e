#pragma once

#include <stdexcept>
#include <string>

namespace zsk {

/// Argument outside the mathematical domain of an operation (M < 2, w <= 0, ...).
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A series or inner sum did not reach its tolerance within the allowed work.
class convergence_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A user-supplied function produced a non-finite value or left its domain.
class evaluation_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text: an expression, a flag value or a config line.
class parse_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace zsk
