#pragma once

#include <stdexcept>
#include <string>

namespace fixorder {

/// Base of the library's error taxonomy. name() is the stable machine-readable
/// tag (the concrete class name); what() prepends it to the message.
class Error : public std::runtime_error {
 public:
  Error(std::string name, const std::string& message)
      : std::runtime_error(name + ": " + message), name_(std::move(name)) {}

  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

/// Matrix or signal dimensions inconsistent with the operation.
struct DimensionError : Error {
  explicit DimensionError(const std::string& m) : Error("DimensionError", m) {}
};

/// Transfer function with numerator degree exceeding denominator degree where
/// a state-space realization is required.
struct NonProperError : Error {
  explicit NonProperError(const std::string& m) : Error("NonProperError", m) {}
};

/// Identically zero denominator, division by a zero rational, or similar
/// degenerate algebraic input.
struct DegenerateError : Error {
  explicit DegenerateError(const std::string& m) : Error("DegenerateError", m) {}
};

/// Channel or entry index outside the valid range.
struct IndexError : Error {
  explicit IndexError(const std::string& m) : Error("IndexError", m) {}
};

/// Invalid option combination (e.g. an augmentation with no weights).
struct ConfigError : Error {
  explicit ConfigError(const std::string& m) : Error("ConfigError", m) {}
};

/// Ill-posed feedback interconnection: I - Dk*D22 singular.
struct AlgebraicLoopError : Error {
  explicit AlgebraicLoopError(const std::string& m) : Error("AlgebraicLoopError", m) {}
};

/// Numerical breakdown: solver failure, overflow, non-convergence.
struct NumericalError : Error {
  explicit NumericalError(const std::string& m) : Error("NumericalError", m) {}
};

/// Frequency response requested at (or within 1e-12 of) a pole on the
/// imaginary axis.
struct SingularFrequencyError : Error {
  explicit SingularFrequencyError(const std::string& m)
      : Error("SingularFrequencyError", m) {}
};

/// Unreadable or schema-violating plant JSON.
struct PlantFormatError : Error {
  explicit PlantFormatError(const std::string& m) : Error("PlantFormatError", m) {}
};

}  // namespace fixorder
