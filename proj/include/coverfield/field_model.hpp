#pragma once

// Biquadratic regression surface over scattered (x, y, value) samples,
// with threshold smoothing toward the observed value bounds.
//
// Coefficient order throughout: 1, x, y, xy, x^2, y^2, x^2 y, x y^2, x^2 y^2.
// Coefficients live in a normalized frame; CoordTransform maps raw meters
// into it.

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace coverfield {

inline constexpr std::size_t kNumCoefficients = 9;
using Coefficients = std::array<double, kNumCoefficients>;

struct ScatterSample {
  double x = 0.0;  ///< easting, m
  double y = 0.0;  ///< northing, m
  double value = 0.0;
};

/// Non-empty, finite sample collection with its observed value bounds.
class SampleSet {
 public:
  /// Throws Error{TooFewSamples} when empty, Error{NonFinite} on any
  /// non-finite field.
  explicit SampleSet(std::vector<ScatterSample> samples);

  std::span<const ScatterSample> samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  const ScatterSample& operator[](std::size_t i) const { return samples_[i]; }
  double value_min() const { return value_min_; }
  double value_max() const { return value_max_; }

 private:
  std::vector<ScatterSample> samples_;
  double value_min_ = 0.0;
  double value_max_ = 0.0;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Affine per-axis map u = (x - x_offset) * x_scale, v = (y - y_offset) * y_scale.
struct CoordTransform {
  double x_offset = 0.0;
  double x_scale = 1.0;
  double y_offset = 0.0;
  double y_scale = 1.0;

  static CoordTransform identity() { return {}; }
  /// Maps the bounding box of the samples onto [-1, 1]^2. A zero-width axis
  /// keeps scale 1 centred on its single coordinate.
  static CoordTransform fit_to(const SampleSet& samples);

  bool valid() const;
  Point2 normalize(double x, double y) const {
    return {(x - x_offset) * x_scale, (y - y_offset) * y_scale};
  }
  Point2 denormalize(double u, double v) const {
    return {u / x_scale + x_offset, v / y_scale + y_offset};
  }
};

struct Gradient {
  double dx = 0.0;  ///< field units per meter
  double dy = 0.0;
  double magnitude() const;
};

/// The nine monomials at normalized point (u, v).
Coefficients design_row(double u, double v);

class BiquadraticSurface {
 public:
  /// Throws Error{InvalidArgument} on non-finite coefficients, beta <= 0,
  /// value_min > value_max or an invalid transform.
  BiquadraticSurface(const Coefficients& a, const CoordTransform& transform,
                     double value_min, double value_max, double beta = 1.0);

  const Coefficients& coefficients() const { return a_; }
  const CoordTransform& transform() const { return transform_; }
  double value_min() const { return value_min_; }
  double value_max() const { return value_max_; }
  double beta() const { return beta_; }

  /// The polynomial f_r at raw coordinates.
  double eval_raw(double x, double y) const;

  /// Threshold-smoothed value f_l. Values at or above value_max map to
  /// value_max + 1/(f_r - value_max + beta), values at or below value_min to
  /// value_min - 1/(value_min - f_r + beta); the upper test runs first.
  /// Note the rule jumps by 1/beta at both thresholds.
  double eval_smoothed(double x, double y) const;

  /// d f_l / d f_r for a given raw polynomial value, using the active branch.
  double smoothing_slope(double fr) const;

  /// Analytic gradient of f_l in field units per raw meter.
  Gradient gradient_smoothed(double x, double y) const;

  /// Gradient of f_r alone (no smoothing factor), raw meters.
  Gradient gradient_raw(double x, double y) const;

  /// Coefficients of the same polynomial expressed directly in raw meters.
  Coefficients raw_frame_coefficients() const;

 private:
  double smooth(double fr) const;

  Coefficients a_;
  CoordTransform transform_;
  double value_min_;
  double value_max_;
  double beta_;
};

struct FitReport {
  std::size_t iterations = 0;
  double final_residual = 0.0;  ///< F(a), sum of squared residuals
  double rmse = 0.0;            ///< sqrt(F(a) / n)
  bool converged = false;
};

struct FitResult {
  BiquadraticSurface surface;
  FitReport report;
};

struct GradientDescentOptions {
  /// Step applied to the gradient of the mean squared residual.
  double learning_rate = 0.5;
  std::size_t max_iterations = 100000;
  /// Relative decrease of F between accepted steps that counts as converged.
  double tolerance = 1e-10;
  double beta = 1.0;
  /// Normalization override; defaults to CoordTransform::fit_to(samples).
  std::optional<CoordTransform> transform;
  /// Called after every accepted step with (iteration, F).
  std::function<void(std::size_t, double)> on_accept;
};

/// Minimizes F(a) by gradient descent from a = 0 with step halving on any
/// increase. Throws TooFewSamples, DegenerateDesign, InvalidArgument.
FitResult fit_gradient_descent(const SampleSet& samples,
                               const GradientDescentOptions& options = {});

/// Closed-form least-squares minimizer of F(a); iterations = 0.
FitResult fit_normal_equations(const SampleSet& samples, double beta = 1.0,
                               std::optional<CoordTransform> transform = {});

/// Number of linearly independent design columns for the samples under the
/// given transform (rank-revealing QR).
std::size_t design_rank(const SampleSet& samples, const CoordTransform& transform);

/// F(a) = sum_i (value_i - f_r(x_i, y_i))^2, accumulated in index order.
double residual_sum_of_squares(const BiquadraticSurface& surface,
                               const SampleSet& samples);

/// Sample standard deviation (n - 1) of value_i - f_l(x_i, y_i).
/// Throws TooFewSamples when n < 2.
double residual_sigma(const BiquadraticSurface& surface, const SampleSet& samples);

}  // namespace coverfield
