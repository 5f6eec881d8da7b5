#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace xxzdm {

// Numerical failure carrying a stable identifier. The CLI prints name() on
// the diagnostic stream and exits with code 3.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(std::string name, const std::string& message)
      : std::runtime_error(message), name_(std::move(name)) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

class NonHermitianInput : public NumericalError {
 public:
  explicit NonHermitianInput(const std::string& message)
      : NumericalError("NonHermitianInput", message) {}
};

class NotPositiveSemidefinite : public NumericalError {
 public:
  explicit NotPositiveSemidefinite(const std::string& message)
      : NumericalError("NotPositiveSemidefinite", message) {}
};

class StepTooLarge : public NumericalError {
 public:
  explicit StepTooLarge(const std::string& message)
      : NumericalError("StepTooLarge", message) {}
};

class NoMinimumBracketed : public NumericalError {
 public:
  explicit NoMinimumBracketed(const std::string& message)
      : NumericalError("NoMinimumBracketed", message) {}
};

class DegenerateFit : public NumericalError {
 public:
  explicit DegenerateFit(const std::string& message)
      : NumericalError("DegenerateFit", message) {}
};

class AmbiguousGroundSpace : public NumericalError {
 public:
  explicit AmbiguousGroundSpace(const std::string& message)
      : NumericalError("AmbiguousGroundSpace", message) {}
};

// Unreadable or schema-violating result file; maps to CLI exit code 2.
class MalformedResultFile : public std::runtime_error {
 public:
  explicit MalformedResultFile(const std::string& message)
      : std::runtime_error(message) {}
};

}  // namespace xxzdm
