#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace nonloc {

/// Broad failure class, used by the CLI to pick an exit code.
enum class ErrorCategory { config, numerical };

class Error : public std::runtime_error {
 public:
  Error(const std::string& what, ErrorCategory category)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }
  virtual const char* kind() const noexcept = 0;

 private:
  ErrorCategory category_;
};

#define NONLOC_DEFINE_ERROR(Name, tag, cat)                            \
  class Name : public Error {                                          \
   public:                                                             \
    explicit Name(const std::string& what) : Error(what, cat) {}       \
    const char* kind() const noexcept override { return tag; }         \
  };

// Argument outside the operation's domain (axis out of range, beta <= 0, ...).
NONLOC_DEFINE_ERROR(DomainError, "domain", ErrorCategory::config)
// Kernel width not resolved by the grid, or box too small for it.
NONLOC_DEFINE_ERROR(ResolutionError, "resolution", ErrorCategory::config)
NONLOC_DEFINE_ERROR(ShapeError, "shape", ErrorCategory::config)
NONLOC_DEFINE_ERROR(UnsupportedBoundaryError, "unsupported-boundary", ErrorCategory::config)
NONLOC_DEFINE_ERROR(InconsistentParametersError, "inconsistent-parameters", ErrorCategory::config)
NONLOC_DEFINE_ERROR(ConfigurationError, "configuration", ErrorCategory::config)
NONLOC_DEFINE_ERROR(CompatibilityError, "compatibility", ErrorCategory::numerical)
NONLOC_DEFINE_ERROR(NumericalError, "numerical", ErrorCategory::numerical)

#undef NONLOC_DEFINE_ERROR

/// Krylov or fixed-point iteration that did not reach its tolerance.
class IterationError : public Error {
 public:
  IterationError(const std::string& what, int iterations, double residual)
      : Error(what, ErrorCategory::numerical), iterations_(iterations), residual_(residual) {}
  const char* kind() const noexcept override { return "iteration"; }
  int iterations() const noexcept { return iterations_; }
  double residual() const noexcept { return residual_; }

 private:
  int iterations_;
  double residual_;
};

/// Config file problems. Carries every validation message, not just the first.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> messages)
      : Error(join(messages), ErrorCategory::config), messages_(std::move(messages)) {}
  const char* kind() const noexcept override { return "config"; }
  const std::vector<std::string>& messages() const noexcept { return messages_; }

 private:
  static std::string join(const std::vector<std::string>& m) {
    std::string out;
    for (const auto& s : m) {
      if (!out.empty()) out += "; ";
      out += s;
    }
    return out;
  }
  std::vector<std::string> messages_;
};

}  // namespace nonloc
