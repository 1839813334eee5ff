#pragma once

#include <stdexcept>
#include <string>

namespace tvcpd {

/// Base for all library errors. Carries the name of the module that failed so
/// CLI output can attribute the failure.
class Error : public std::runtime_error {
 public:
  Error(std::string module, const std::string& message)
      : std::runtime_error(message), module_(std::move(module)) {}

  const std::string& module() const noexcept { return module_; }

 private:
  std::string module_;
};

// -- core ------------------------------------------------------------------

struct ZeroVarianceFeature : Error {
  explicit ZeroVarianceFeature(const std::string& feature)
      : Error("core", "feature '" + feature + "' has zero variance") {}
};

struct AllFeaturesDropped : Error {
  explicit AllFeaturesDropped(const std::string& msg)
      : Error("core", msg) {}
};

struct InvalidTimeSeries : Error {
  explicit InvalidTimeSeries(const std::string& msg) : Error("core", msg) {}
};

struct ParseError : Error {
  ParseError(const std::string& path, int line, const std::string& msg)
      : Error("core", path + ":" + std::to_string(line) + ": " + msg) {}
};

// -- tvgl ------------------------------------------------------------------

struct SeriesTooShort : Error {
  SeriesTooShort(std::string module, const std::string& msg)
      : Error(std::move(module), msg) {}
};

struct NonSymmetricInput : Error {
  explicit NonSymmetricInput(const std::string& msg) : Error("tvgl", msg) {}
};

struct IndexOutOfRange : Error {
  explicit IndexOutOfRange(const std::string& msg) : Error("tvgl", msg) {}
};

struct DiagonalRequest : Error {
  explicit DiagonalRequest(const std::string& msg) : Error("tvgl", msg) {}
};

// -- mmd -------------------------------------------------------------------

struct NonpositiveBandwidth : Error {
  explicit NonpositiveBandwidth(double bw)
      : Error("mmd", "bandwidth must be > 0, got " + std::to_string(bw)) {}
};

struct WindowTooSmall : Error {
  explicit WindowTooSmall(const std::string& msg) : Error("mmd", msg) {}
};

// -- ensemble --------------------------------------------------------------

struct InvalidFilterParams : Error {
  explicit InvalidFilterParams(const std::string& msg)
      : Error("ensemble", msg) {}
};

struct LengthMismatch : Error {
  explicit LengthMismatch(const std::string& msg) : Error("ensemble", msg) {}
};

// -- datagen ---------------------------------------------------------------

struct InvalidSpec : Error {
  explicit InvalidSpec(const std::string& msg) : Error("datagen", msg) {}
};

struct UnknownFamily : Error {
  explicit UnknownFamily(const std::string& name)
      : Error("cli", "unknown dataset family '" + name + "'") {}
};

// -- config ----------------------------------------------------------------

struct InvalidConfig : Error {
  InvalidConfig(std::string module, const std::string& msg)
      : Error(std::move(module), msg) {}
};

}  // namespace tvcpd
