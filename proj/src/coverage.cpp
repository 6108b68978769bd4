#include "coverfield/coverage.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "coverfield/error.hpp"

namespace coverfield {

namespace {

void check_mask(const GridSpec& grid, const Mask& mask) {
  grid.validate();
  if (mask.size() != grid.size()) {
    std::ostringstream msg;
    msg << "mask has " << mask.size() << " cells, grid has " << grid.size() << " nodes";
    throw Error(Errc::MaskMismatch, msg.str());
  }
}

template <typename NodeFn>
RasterField fill_raster(const GridSpec& grid, const Mask& mask, NodeFn&& at_node) {
  check_mask(grid, mask);
  RasterField raster{grid, std::vector<double>(grid.size(), RasterField::kNoData), mask};
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    if (!mask[idx]) continue;
    const auto p = grid.node(idx);
    raster.values[idx] = at_node(p.x, p.y);
  }
  return raster;
}

// Number of refined nodes spanning `length` at spacing step/factor. The small
// slack absorbs rounding when length is an exact multiple of the coarse step.
std::size_t refined_count(double length, double step, int factor) {
  const double cells = length * static_cast<double>(factor) / step;
  return static_cast<std::size_t>(std::floor(cells + 1e-9)) + 1;
}

}  // namespace

void SensorSpec::validate() const {
  if (abs_error) {
    if (!(*abs_error > 0.0) || !std::isfinite(*abs_error)) {
      throw Error(Errc::InvalidArgument, "sensor abs_error must be finite and > 0");
    }
  } else {
    if (!(r_max > 0.0) || !std::isfinite(r_max)) {
      throw Error(Errc::InvalidArgument, "sensor r_max must be finite and > 0");
    }
    if (!(xi > 0.0 && xi < 1.0)) throw Error(Errc::InvalidArgument, "sensor xi must lie in (0, 1)");
  }
  if (!(r_cap > 0.0) || !std::isfinite(r_cap)) {
    throw Error(Errc::InvalidArgument, "sensor r_cap must be finite and > 0");
  }
}

void GridSpec::validate() const {
  if (!(dx > 0.0) || !(dy > 0.0) || !std::isfinite(dx) || !std::isfinite(dy)) {
    throw Error(Errc::InvalidArgument, "grid spacing must be finite and > 0");
  }
  if (!std::isfinite(x0) || !std::isfinite(y0)) {
    throw Error(Errc::InvalidArgument, "grid origin must be finite");
  }
  if (nx < 2 || ny < 2) throw Error(Errc::InvalidArgument, "grid needs at least 2x2 nodes");
}

double GridSpec::diagonal() const { return std::hypot(x_max() - x0, y_max() - y0); }

Mask all_water(const GridSpec& grid) { return Mask(grid.size(), 1); }

std::size_t RasterField::water_count() const {
  return static_cast<std::size_t>(std::count_if(mask.begin(), mask.end(), [](auto m) { return m != 0; }));
}

std::optional<double> RasterField::water_min() const {
  std::optional<double> out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (is_water(i)) out = out ? std::min(*out, values[i]) : values[i];
  }
  return out;
}

std::optional<double> RasterField::water_max() const {
  std::optional<double> out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (is_water(i)) out = out ? std::max(*out, values[i]) : values[i];
  }
  return out;
}

double coverage_radius_at(const BiquadraticSurface& surface, const SensorSpec& sensor, double x,
                          double y) {
  const double g = surface.gradient_smoothed(x, y).magnitude();
  if (g == 0.0) return sensor.r_cap;
  return std::min(sensor.r_cap, sensor.absolute_error() / g);
}

RasterField gradient_magnitude_field(const BiquadraticSurface& surface, const GridSpec& grid,
                                     const Mask& mask) {
  return fill_raster(grid, mask, [&](double x, double y) {
    return surface.gradient_smoothed(x, y).magnitude();
  });
}

RasterField coverage_field(const BiquadraticSurface& surface, const SensorSpec& sensor,
                           const GridSpec& grid, const Mask& mask) {
  sensor.validate();
  return fill_raster(grid, mask, [&](double x, double y) {
    return coverage_radius_at(surface, sensor, x, y);
  });
}

GridSpec region_refine(const GridSpec& grid, const BoundingBox& bbox, int factor) {
  grid.validate();
  if (factor < 2) throw Error(Errc::InvalidArgument, "refinement factor must be >= 2");

  const double x_lo = std::max(bbox.x_lo, grid.x0);
  const double x_hi = std::min(bbox.x_hi, grid.x_max());
  const double y_lo = std::max(bbox.y_lo, grid.y0);
  const double y_hi = std::min(bbox.y_hi, grid.y_max());
  if (!(x_lo <= x_hi) || !(y_lo <= y_hi)) {
    throw Error(Errc::EmptyRegion, "refinement box does not intersect the grid extent");
  }

  GridSpec fine;
  fine.x0 = x_lo;
  fine.y0 = y_lo;
  fine.dx = grid.dx / factor;
  fine.dy = grid.dy / factor;
  fine.nx = refined_count(x_hi - x_lo, grid.dx, factor);
  fine.ny = refined_count(y_hi - y_lo, grid.dy, factor);
  if (fine.nx < 2 || fine.ny < 2) {
    throw Error(Errc::EmptyRegion, "refinement box is thinner than one refined cell");
  }
  return fine;
}

Mask resample_mask(const GridSpec& coarse, const Mask& coarse_mask, const GridSpec& fine) {
  check_mask(coarse, coarse_mask);
  fine.validate();
  auto nearest = [](double pos, double origin, double step, std::size_t count) {
    const double k = std::round((pos - origin) / step);
    return static_cast<std::size_t>(std::clamp(k, 0.0, static_cast<double>(count - 1)));
  };
  Mask out(fine.size());
  for (std::size_t j = 0; j < fine.ny; ++j) {
    const std::size_t cj = nearest(fine.y_at(j), coarse.y0, coarse.dy, coarse.ny);
    for (std::size_t i = 0; i < fine.nx; ++i) {
      const std::size_t ci = nearest(fine.x_at(i), coarse.x0, coarse.dx, coarse.nx);
      out[j * fine.nx + i] = coarse_mask[cj * coarse.nx + ci];
    }
  }
  return out;
}

}  // namespace coverfield
