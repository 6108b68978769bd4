#include "coverfield/pipeline.hpp"

#include <fstream>
#include <ostream>
#include <utility>

#include "coverfield/anomaly.hpp"
#include "coverfield/config.hpp"
#include "coverfield/coverage.hpp"
#include "coverfield/field_model.hpp"
#include "coverfield/io.hpp"
#include "coverfield/station_planner.hpp"

namespace coverfield {

namespace {

template <typename Fn>
auto stage(const char* name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(name, e.code(), e.what());
  } catch (const std::exception& e) {
    throw StageError(name, Errc::IoFailure, e.what());
  }
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoFailure, "cannot open " + path.string());
  return in;
}

// Prefixes the file name so row numbers point at a concrete input.
template <typename Fn>
auto with_file(const std::filesystem::path& path, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

bool needs_grid(Command c) {
  return c == Command::CoverageMap || c == Command::Plan || c == Command::Pipeline;
}

}  // namespace

std::optional<Command> parse_command(std::string_view name) {
  if (name == "fit") return Command::Fit;
  if (name == "coverage-map") return Command::CoverageMap;
  if (name == "plan") return Command::Plan;
  if (name == "detect") return Command::Detect;
  if (name == "pipeline") return Command::Pipeline;
  return std::nullopt;
}

void execute(const PipelineRequest& request, std::ostream& log) {
  const PipelineConfig config = stage("load_config", [&] { return load_config(request.config); });

  const SampleSet samples = stage("parse_samples", [&] {
    auto in = open_input(request.samples);
    return with_file(request.samples, [&] { return parse_samples(in, config.projection); });
  });
  log << "samples: " << samples.size() << " rows, value range [" << format_double(samples.value_min())
      << ", " << format_double(samples.value_max()) << "]\n";

  std::optional<GridSpec> grid;
  Mask mask;
  if (needs_grid(request.command)) {
    grid = stage("load_config", [&] { return config.require_grid(); });
    mask = stage("parse_mask", [&] {
      if (!request.mask) return all_water(*grid);
      auto in = open_input(*request.mask);
      return with_file(*request.mask, [&] { return parse_mask(in, *grid); });
    });
  }

  std::optional<SampleSet> detect_samples;
  if (request.command == Command::Detect ||
      (request.command == Command::Pipeline && request.detect_samples)) {
    detect_samples = stage("parse_detect_samples", [&] {
      if (!request.detect_samples) throw Error(Errc::IoFailure, "detect needs --detect-samples");
      auto in = open_input(*request.detect_samples);
      return with_file(*request.detect_samples, [&] { return parse_samples(in, config.projection); });
    });
  }

  const FitResult fit = stage("fit", [&] {
    if (config.fit.method == FitMethod::NormalEquations) {
      return fit_normal_equations(samples, config.fit.beta);
    }
    GradientDescentOptions opts;
    opts.learning_rate = config.fit.learning_rate;
    opts.max_iterations = config.fit.max_iterations;
    opts.tolerance = config.fit.tolerance;
    opts.beta = config.fit.beta;
    return fit_gradient_descent(samples, opts);
  });
  log << "fit: F = " << format_double(fit.report.final_residual)
      << ", rmse = " << format_double(fit.report.rmse) << ", iterations = " << fit.report.iterations
      << (fit.report.converged ? "" : " (not converged)") << '\n';

  stage("write_outputs", [&] {
    std::filesystem::create_directories(request.out_dir);
    const auto path = request.out_dir / "fit.txt";
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::IoFailure, "cannot open " + path.string());
    write_fit_report(fit.surface, fit.report, out);
    if (!out.flush()) throw Error(Errc::IoFailure, "write failed for " + path.string());
  });

  if (grid) {
    GridSpec work_grid = *grid;
    Mask work_mask = mask;
    if (config.refine.enabled) {
      work_grid = stage("region_refine", [&] {
        return region_refine(*grid, config.refine.bbox, config.refine.factor);
      });
      work_mask = stage("region_refine", [&] { return resample_mask(*grid, mask, work_grid); });
      log << "refined grid: " << work_grid.nx << " x " << work_grid.ny << " nodes, spacing "
          << format_double(work_grid.dx) << " x " << format_double(work_grid.dy) << " m\n";
    }

    const RasterField gradient = stage("gradient_field", [&] {
      return gradient_magnitude_field(fit.surface, work_grid, work_mask);
    });
    const SensorSpec sensor = config.sensor.resolve(work_grid);
    const RasterField coverage = stage("coverage_field", [&] {
      return coverage_field(fit.surface, sensor, work_grid, work_mask);
    });
    stage("write_outputs", [&] {
      write_raster(gradient, request.out_dir / "gradient", "field units per m");
      write_raster(coverage, request.out_dir / "coverage", "m");
    });
    log << "coverage: " << coverage.water_count() << " water nodes, radius range ["
        << (coverage.water_min() ? format_double(*coverage.water_min()) : "NA") << ", "
        << (coverage.water_max() ? format_double(*coverage.water_max()) : "NA") << "] m\n";

    if (request.command != Command::CoverageMap) {
      const StationPlan plan = stage("plan_stations", [&] {
        return plan_stations_greedy(coverage, config.tour.start_index);
      });
      stage("write_outputs", [&] { write_plan(plan, request.out_dir / "plan.json"); });
      log << "plan: " << plan.stations.size() << " stations, tour " << format_double(plan.tour_length)
          << " m, covered fraction " << format_double(plan.covered_fraction) << '\n';
    }
  }

  if (detect_samples) {
    const auto reports = stage("detect", [&] {
      const double sigma = residual_sigma(fit.surface, samples);
      return detect(*detect_samples, fit.surface, sigma, config.anomaly.k,
                    {config.anomaly.lo, config.anomaly.hi});
    });
    stage("write_outputs", [&] {
      const auto path = request.out_dir / "anomalies.csv";
      std::ofstream out(path, std::ios::binary | std::ios::trunc);
      if (!out) throw Error(Errc::IoFailure, "cannot open " + path.string());
      write_anomalies(reports, out);
      if (!out.flush()) throw Error(Errc::IoFailure, "write failed for " + path.string());
    });
    std::size_t flagged = 0;
    for (const auto& r : reports) flagged += r.flagged ? 1 : 0;
    log << "detect: " << flagged << " of " << reports.size() << " samples flagged\n";
  }
}

int run_pipeline(const PipelineRequest& request, std::ostream& log, std::ostream& err) {
  try {
    execute(request, log);
    return 0;
  } catch (const StageError& e) {
    err << "coverfield: stage " << e.stage() << " failed [" << to_string(e.code()) << "]: " << e.what()
        << '\n';
    return 1;
  }
}

}  // namespace coverfield
