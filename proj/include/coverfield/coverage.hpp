#pragma once

// Gradient-magnitude and coverage-radius rasters over a masked regular grid.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "coverfield/field_model.hpp"

namespace coverfield {

/// Measuring channel. The absolute error is abs_error when set, otherwise
/// r_max * xi.
struct SensorSpec {
  double r_max = 10.0;
  double xi = 1e-4;
  std::optional<double> abs_error;
  double r_cap = 1.0;  ///< m

  double absolute_error() const { return abs_error ? *abs_error : r_max * xi; }
  /// Throws Error{InvalidArgument} when an invariant fails.
  void validate() const;
};

/// Regular grid; node (i, j) sits at (x0 + i*dx, y0 + j*dy), row-major index j*nx + i.
struct GridSpec {
  double x0 = 0.0;
  double y0 = 0.0;
  double dx = 1.0;
  double dy = 1.0;
  std::size_t nx = 2;
  std::size_t ny = 2;

  void validate() const;
  std::size_t size() const { return nx * ny; }
  double x_at(std::size_t i) const { return x0 + static_cast<double>(i) * dx; }
  double y_at(std::size_t j) const { return y0 + static_cast<double>(j) * dy; }
  double x_max() const { return x_at(nx - 1); }
  double y_max() const { return y_at(ny - 1); }
  Point2 node(std::size_t index) const { return {x_at(index % nx), y_at(index / nx)}; }
  double diagonal() const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Row-major water mask: 1 = water / in-domain, 0 = land.
using Mask = std::vector<std::uint8_t>;

Mask all_water(const GridSpec& grid);

struct RasterField {
  static constexpr double kNoData = std::numeric_limits<double>::quiet_NaN();

  GridSpec grid;
  std::vector<double> values;  ///< kNoData at land nodes
  Mask mask;

  bool is_water(std::size_t index) const { return mask[index] != 0; }
  std::size_t water_count() const;
  /// Min / max over water nodes; nullopt when there are none.
  std::optional<double> water_min() const;
  std::optional<double> water_max() const;
};

/// min(r_cap, E / |grad f_l|), or r_cap where the gradient vanishes.
double coverage_radius_at(const BiquadraticSurface& surface, const SensorSpec& sensor, double x,
                          double y);

/// |grad f_l| at water nodes. Throws Error{MaskMismatch}.
RasterField gradient_magnitude_field(const BiquadraticSurface& surface, const GridSpec& grid,
                                     const Mask& mask);

/// coverage_radius_at at water nodes. Throws Error{MaskMismatch}.
RasterField coverage_field(const BiquadraticSurface& surface, const SensorSpec& sensor,
                           const GridSpec& grid, const Mask& mask);

struct BoundingBox {
  double x_lo = 0.0;
  double y_lo = 0.0;
  double x_hi = 0.0;
  double y_hi = 0.0;
};

/// Denser grid over bbox clipped to the grid extent, spacing divided by
/// factor, origin at the clipped lower-left corner. Throws Error{EmptyRegion}
/// when the clipped box holds fewer than 2 refined nodes per axis, and
/// Error{InvalidArgument} when factor < 2.
GridSpec region_refine(const GridSpec& grid, const BoundingBox& bbox, int factor);

/// Carries a coarse mask onto a finer grid: each fine node takes the value of
/// the nearest coarse node (clamped to the coarse extent).
Mask resample_mask(const GridSpec& coarse, const Mask& coarse_mask, const GridSpec& fine);

}  // namespace coverfield
