#pragma once

// Text formats: sample and mask CSV input, raster CSV/PGM/legend output,
// JSON station plans, anomaly CSV and the fit report.

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>

#include "coverfield/anomaly.hpp"
#include "coverfield/config.hpp"
#include "coverfield/coverage.hpp"
#include "coverfield/field_model.hpp"
#include "coverfield/station_planner.hpp"

namespace coverfield {

inline constexpr double kEarthRadiusM = 6371000.0;

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

/// CSV with header `x,y,value`, or `lon,lat,value` under the equirect
/// projection, which maps degrees to meters about the sample centroid.
/// Throws EmptyFile, MalformedRow (with the line number), NonFiniteValue.
SampleSet parse_samples(std::istream& in, const ProjectionConfig& projection);

/// ny rows of nx comma-separated 0/1 cells; the first row is the y0 row.
/// Throws ShapeMismatch, InvalidCell.
Mask parse_mask(std::istream& in, const GridSpec& grid);

/// Raster CSV: first row holds the grid values `x0,y0,dx,dy,nx,ny`, then
/// ny rows (first row = y0) of nx values with land as `NA`.
void write_raster_csv(const RasterField& raster, std::ostream& out);
RasterField read_raster_csv(std::istream& in);

/// Plain 8-bit PGM (P2), north row first. Water values are scaled linearly
/// from the water min (0) to the water max (255); land is 0.
void write_raster_pgm(const RasterField& raster, std::ostream& out);

void write_raster_legend(const RasterField& raster, std::string_view units, std::ostream& out);

/// Writes <base>.csv, <base>.pgm and <base>.legend.txt. Throws IoFailure.
void write_raster(const RasterField& raster, const std::filesystem::path& base,
                  std::string_view units);

/// JSON with keys in order: stations [{x, y, radius}], tour, tour_length_m,
/// covered_fraction. Throws InvalidPlan for an empty plan or a tour that is
/// not a permutation of the stations.
std::string plan_to_json(const StationPlan& plan);
StationPlan plan_from_json(std::string_view text);
void write_plan(const StationPlan& plan, const std::filesystem::path& path);
StationPlan read_plan(const std::filesystem::path& path);

/// Columns x,y,value,predicted,residual,z,flagged,reason.
void write_anomalies(std::span<const AnomalyReport> reports, std::ostream& out);

/// Raw-frame coefficients, F(a), rmse, iterations, converged.
void write_fit_report(const BiquadraticSurface& surface, const FitReport& report, std::ostream& out);

}  // namespace coverfield
