#pragma once

// Residual and range screening of new measurements against a fitted surface.

#include <string_view>
#include <vector>

#include "coverfield/field_model.hpp"

namespace coverfield {

enum class AnomalyReason { None, Residual, Range };

std::string_view to_string(AnomalyReason reason);

struct AnomalyReport {
  ScatterSample sample;
  double predicted = 0.0;  ///< f_l at the sample point
  double residual = 0.0;   ///< value - predicted
  double z_score = 0.0;    ///< residual / sigma; 0 when sigma == 0
  bool flagged = false;
  AnomalyReason reason = AnomalyReason::None;
};

struct ValueRange {
  double lo;
  double hi;
};

/// One report per sample in input order. A value outside [lo, hi] is flagged
/// as Range; otherwise |z| > k (only when sigma > 0) is flagged as Residual.
/// Throws Error{InvalidArgument} unless sigma >= 0, k > 0 and lo < hi.
std::vector<AnomalyReport> detect(const SampleSet& samples, const BiquadraticSurface& surface,
                                  double sigma, double k, ValueRange range);

}  // namespace coverfield
