#pragma once

#include <stdexcept>
#include <string>

namespace isocone {

// Base for all failures this library reports deliberately. Callers that
// want the coarse split (bad input vs failed verification) can catch
// ConfigError separately; everything else derives from Error.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

// geometry
struct NoAsymptoteError : Error {
  explicit NoAsymptoteError(const std::string& msg) : Error(msg) {}
};
struct DegenerateSlopeError : Error {
  explicit DegenerateSlopeError(const std::string& msg) : Error(msg) {}
};
struct NotConicallyBoundedError : Error {
  explicit NotConicallyBoundedError(const std::string& msg) : Error(msg) {}
};

// foliation
struct ThresholdNotFoundError : Error {
  explicit ThresholdNotFoundError(const std::string& msg) : Error(msg) {}
};
struct DegenerateCapError : Error {
  explicit DegenerateCapError(const std::string& msg) : Error(msg) {}
};
struct VolumeTooSmallError : Error {
  explicit VolumeTooSmallError(const std::string& msg) : Error(msg) {}
};

// solver
struct NoHitError : Error {
  explicit NoHitError(const std::string& msg) : Error(msg) {}
};
struct SolverDivergedError : Error {
  explicit SolverDivergedError(const std::string& msg) : Error(msg) {}
};
struct LowerBoundViolatedError : Error {
  explicit LowerBoundViolatedError(const std::string& msg) : Error(msg) {}
};
struct CapMismatchError : Error {
  explicit CapMismatchError(const std::string& msg) : Error(msg) {}
};

// spectral
struct NotBracketedError : Error {
  explicit NotBracketedError(const std::string& msg) : Error(msg) {}
};

}  // namespace isocone
