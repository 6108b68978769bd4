#include "coverfield/anomaly.hpp"

#include <cmath>

#include "coverfield/error.hpp"

namespace coverfield {

std::string_view to_string(AnomalyReason reason) {
  switch (reason) {
    case AnomalyReason::None: return "none";
    case AnomalyReason::Residual: return "residual";
    case AnomalyReason::Range: return "range";
  }
  return "none";
}

std::vector<AnomalyReport> detect(const SampleSet& samples, const BiquadraticSurface& surface,
                                  double sigma, double k, ValueRange range) {
  if (!(sigma >= 0.0) || !(k > 0.0) || !(range.lo < range.hi)) {
    throw Error(Errc::InvalidArgument, "detect requires sigma >= 0, k > 0 and lo < hi");
  }
  std::vector<AnomalyReport> reports;
  reports.reserve(samples.size());
  for (const auto& s : samples.samples()) {
    AnomalyReport r;
    r.sample = s;
    r.predicted = surface.eval_smoothed(s.x, s.y);
    r.residual = s.value - r.predicted;
    r.z_score = sigma > 0.0 ? r.residual / sigma : 0.0;
    if (s.value < range.lo || s.value > range.hi) {
      r.reason = AnomalyReason::Range;
    } else if (sigma > 0.0 && std::abs(r.z_score) > k) {
      r.reason = AnomalyReason::Residual;
    }
    r.flagged = r.reason != AnomalyReason::None;
    reports.push_back(r);
  }
  return reports;
}

}  // namespace coverfield
