#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace biheun {

enum class ErrorKind {
  invalid_argument,
  degenerate_leading_coefficient,
  indicial_collision,
  non_convergence,
  resonant_order,
  lower_parameter_pole,
  degenerate_root,
  degenerate_parameter,
  singular_path,
  normalization_failure,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "InvalidArgument";
    case ErrorKind::degenerate_leading_coefficient: return "DegenerateLeadingCoefficient";
    case ErrorKind::indicial_collision: return "IndicialCollision";
    case ErrorKind::non_convergence: return "NonConvergence";
    case ErrorKind::resonant_order: return "ResonantOrder";
    case ErrorKind::lower_parameter_pole: return "LowerParameterPole";
    case ErrorKind::degenerate_root: return "DegenerateRoot";
    case ErrorKind::degenerate_parameter: return "DegenerateParameter";
    case ErrorKind::singular_path: return "SingularPath";
    case ErrorKind::normalization_failure: return "NormalizationFailure";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the ErrorKind tags so
/// callers (the CLI in particular) can serialize it without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace biheun
