#include "coverfield/error.hpp"

namespace coverfield {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::TooFewSamples: return "TooFewSamples";
    case Errc::DegenerateDesign: return "DegenerateDesign";
    case Errc::NonFinite: return "NonFinite";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::MaskMismatch: return "MaskMismatch";
    case Errc::EmptyRegion: return "EmptyRegion";
    case Errc::EmptyDomain: return "EmptyDomain";
    case Errc::GridMismatch: return "GridMismatch";
    case Errc::EmptyFile: return "EmptyFile";
    case Errc::MalformedRow: return "MalformedRow";
    case Errc::NonFiniteValue: return "NonFiniteValue";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::InvalidCell: return "InvalidCell";
    case Errc::IoFailure: return "IoFailure";
    case Errc::InvalidPlan: return "InvalidPlan";
    case Errc::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace coverfield
