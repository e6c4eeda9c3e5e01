#pragma once

#include <stdexcept>
#include <string>

namespace umax {

// Error classes map onto process exit codes at the CLI boundary:
// config errors -> 2, condition violations -> 3, numeric/runtime -> 4.
enum class ErrorKind { Config = 2, Condition = 3, Numeric = 4 };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string code, const std::string& what)
      : std::runtime_error(what), kind_(kind), code_(std::move(code)) {}
  ErrorKind kind() const { return kind_; }
  const std::string& code() const { return code_; }

 private:
  ErrorKind kind_;
  std::string code_;
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& what) : Error(ErrorKind::Config, "config", what) {}
};

struct DegreeError : Error {
  explicit DegreeError(const std::string& what) : Error(ErrorKind::Config, "degree", what) {}
};

struct FamilyError : Error {
  explicit FamilyError(const std::string& what) : Error(ErrorKind::Config, "family", what) {}
};

// A custom kernel failed the rotation/permutation invariance probe, or a
// density failed normalization/positivity checks.
struct ValidationError : Error {
  explicit ValidationError(const std::string& what) : Error(ErrorKind::Config, "validation", what) {}
};

// The maximizer touches the boundary of the ordered simplex: some points of
// the extremal configuration coincide, so the interior-maximum assumption
// fails and no limit law of Weibull type is produced.
struct BoundaryMaximum : Error {
  explicit BoundaryMaximum(const std::string& what)
      : Error(ErrorKind::Condition, "boundary-maximum", what) {}
};

struct DegenerateHessian : Error {
  explicit DegenerateHessian(const std::string& what)
      : Error(ErrorKind::Condition, "degenerate-hessian", what) {}
};

// The kernel is unbounded above in the analyzed direction (infinity sentinel
// attained), so no finite maximum exists.
struct UnboundedKernel : Error {
  explicit UnboundedKernel(const std::string& what)
      : Error(ErrorKind::Condition, "unbounded", what) {}
};

// Every maximizer has vanishing density product integral.
struct B3Violation : Error {
  explicit B3Violation(const std::string& what)
      : Error(ErrorKind::Condition, "b3-violation", what) {}
};

// Second derivative of the generator has the wrong sign for the requested
// extremum mode (e.g. u-max with a convex generator).
struct ModeMismatch : Error {
  explicit ModeMismatch(const std::string& what)
      : Error(ErrorKind::Condition, "mode-mismatch", what) {}
};

struct DomainError : Error {
  explicit DomainError(const std::string& what) : Error(ErrorKind::Numeric, "domain", what) {}
};

struct ConsistencyError : Error {
  explicit ConsistencyError(const std::string& what)
      : Error(ErrorKind::Numeric, "consistency", what) {}
};

}  // namespace umax
