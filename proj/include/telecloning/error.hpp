#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace telecloning {

enum class errc {
  max_photons_exceeded,
  mode_collision,
  zero_state,
  non_unitary_transform,
  invalid_reflectivity,
  mode_mismatch,
  unnormalized_input,
  wrong_subsystem,
  invalid_distribution,
  invalid_overlap,
  invalid_argument,
  parse_error,
  undeclared_mode,
  duplicate_select,
};

inline std::string_view to_string(errc code) {
  switch (code) {
    case errc::max_photons_exceeded: return "MaxPhotonsExceeded";
    case errc::mode_collision: return "ModeCollision";
    case errc::zero_state: return "ZeroState";
    case errc::non_unitary_transform: return "NonUnitaryTransform";
    case errc::invalid_reflectivity: return "InvalidReflectivity";
    case errc::mode_mismatch: return "ModeMismatch";
    case errc::unnormalized_input: return "UnnormalizedInput";
    case errc::wrong_subsystem: return "WrongSubsystem";
    case errc::invalid_distribution: return "InvalidDistribution";
    case errc::invalid_overlap: return "InvalidOverlap";
    case errc::invalid_argument: return "InvalidArgument";
    case errc::parse_error: return "ParseError";
    case errc::undeclared_mode: return "UndeclaredMode";
    case errc::duplicate_select: return "DuplicateSelect";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

/// Circuit-text diagnostics; line and column are 1-based.
class parse_error : public error {
 public:
  parse_error(errc code, std::size_t line, std::size_t column, std::string token,
              const std::string& message)
      : error(code, "line " + std::to_string(line) + ", column " + std::to_string(column) +
                        ": " + message + " ('" + token + "')"),
        line_(line),
        column_(column),
        token_(std::move(token)) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& token() const noexcept { return token_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string token_;
};

}  // namespace telecloning
