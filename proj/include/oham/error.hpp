#pragma once

#include <stdexcept>
#include <string>

namespace oham {

enum class Errc {
  domain_error,
  non_integrable_reciprocal,
  zero_mu,
  zero_alpha,
  quadrature_divergence,
  jet_domain_error,
  non_finite_component,
  no_finite_sample,
  invalid_delta,
  unknown_parameter,
  missing_parameter,
  parse_error,
  validation_error,
  singular_system,
  no_convergence,
  invalid_argument,
};

inline const char* errc_name(Errc code) {
  switch (code) {
    case Errc::domain_error: return "DomainError";
    case Errc::non_integrable_reciprocal: return "NonIntegrableReciprocal";
    case Errc::zero_mu: return "ZeroMu";
    case Errc::zero_alpha: return "ZeroAlpha";
    case Errc::quadrature_divergence: return "QuadratureDivergence";
    case Errc::jet_domain_error: return "JetDomainError";
    case Errc::non_finite_component: return "NonFiniteComponent";
    case Errc::no_finite_sample: return "NoFiniteSample";
    case Errc::invalid_delta: return "InvalidDelta";
    case Errc::unknown_parameter: return "UnknownParameter";
    case Errc::missing_parameter: return "MissingParameter";
    case Errc::parse_error: return "ParseError";
    case Errc::validation_error: return "ValidationError";
    case Errc::singular_system: return "SingularSystem";
    case Errc::no_convergence: return "NoConvergence";
    case Errc::invalid_argument: return "InvalidArgument";
  }
  return "Error";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

  /// True for errors caused by bad problem data or arguments rather than
  /// by the solver itself.
  bool is_validation() const noexcept {
    switch (code_) {
      case Errc::non_integrable_reciprocal:
      case Errc::zero_mu:
      case Errc::zero_alpha:
      case Errc::quadrature_divergence:
      case Errc::unknown_parameter:
      case Errc::missing_parameter:
      case Errc::parse_error:
      case Errc::validation_error:
      case Errc::invalid_argument:
      case Errc::invalid_delta:
        return true;
      default:
        return false;
    }
  }

 private:
  Errc code_;
};

class ParseError : public Error {
 public:
  ParseError(int line, int column, const std::string& what)
      : Error(Errc::parse_error,
              "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line_(line),
        column_(column),
        detail_(what) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  int line_;
  int column_;
  std::string detail_;
};

}  // namespace oham
