#pragma once

// Pipeline configuration, read from a TOML file.
//
//   [sensor]     r_max, xi, abs_error (optional), r_cap (optional, default grid diagonal)
//   [fit]        method = "gradient_descent" | "normal_equations",
//                learning_rate, max_iterations, tolerance, beta
//   [grid]       x0, y0, dx, dy, nx, ny  (no defaults; required for raster stages)
//   [refine]     enabled, bbox = [x_lo, y_lo, x_hi, y_hi], factor
//   [anomaly]    k, lo, hi
//   [tour]       start_index
//   [projection] kind = "none" | "equirect", ref_lat (degrees)

#include <cstddef>
#include <filesystem>
#include <istream>
#include <limits>
#include <optional>

#include "coverfield/coverage.hpp"

namespace coverfield {

enum class FitMethod { GradientDescent, NormalEquations };

struct FitConfig {
  FitMethod method = FitMethod::GradientDescent;
  double learning_rate = 0.5;
  std::size_t max_iterations = 100000;
  double tolerance = 1e-10;
  double beta = 1.0;
};

struct SensorConfig {
  double r_max = 10.0;
  double xi = 1e-4;  // r_max * xi = 0.001 field units
  std::optional<double> abs_error;
  std::optional<double> r_cap;

  /// Fills the radius cap from the grid diagonal when unset.
  SensorSpec resolve(const GridSpec& grid) const;
};

struct RefineConfig {
  bool enabled = false;
  BoundingBox bbox;
  int factor = 2;
};

struct AnomalyConfig {
  double k = 3.0;
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
};

struct TourConfig {
  std::size_t start_index = 0;
};

enum class ProjectionKind { None, Equirect };

struct ProjectionConfig {
  ProjectionKind kind = ProjectionKind::None;
  double ref_lat_deg = 0.0;
};

struct PipelineConfig {
  SensorConfig sensor;
  FitConfig fit;
  std::optional<GridSpec> grid;
  RefineConfig refine;
  AnomalyConfig anomaly;
  TourConfig tour;
  ProjectionConfig projection;

  /// Checks every stage precondition that does not depend on the data.
  /// Throws Error{ConfigError}.
  void validate() const;
  /// The grid, or Error{ConfigError} when the [grid] table is absent.
  const GridSpec& require_grid() const;
};

/// Throws Error{ConfigError} for syntax errors, unknown tables or keys, and
/// values of the wrong type.
PipelineConfig parse_config(std::istream& in);
PipelineConfig load_config(const std::filesystem::path& path);

}  // namespace coverfield
