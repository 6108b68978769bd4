#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace coverfield {

enum class Errc {
  TooFewSamples,
  DegenerateDesign,
  NonFinite,
  InvalidArgument,
  MaskMismatch,
  EmptyRegion,
  EmptyDomain,
  GridMismatch,
  EmptyFile,
  MalformedRow,
  NonFiniteValue,
  ShapeMismatch,
  InvalidCell,
  IoFailure,
  InvalidPlan,
  ConfigError,
};

std::string_view to_string(Errc code);

/// Library error carrying a machine-checkable code alongside the message.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace coverfield
