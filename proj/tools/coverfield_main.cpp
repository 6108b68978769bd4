// coverfield fit|coverage-map|plan|detect|pipeline --config <path> --samples <path>
//            [--mask <path>] [--out <dir>] [--detect-samples <path>]

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "coverfield/pipeline.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Coverage-radius maps and station plans from scattered field samples"};
  app.require_subcommand(1);

  std::string config, samples, mask, out = ".", detect_samples;
  const std::pair<const char*, const char*> commands[] = {
      {"fit", "Fit the smoothed biquadratic surface and write fit.txt"},
      {"coverage-map", "Fit, then write gradient and coverage rasters"},
      {"plan", "Fit, map coverage and plan covering stations with a survey tour"},
      {"detect", "Fit, then flag anomalous readings from --detect-samples"},
      {"pipeline", "Run every stage"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config, "TOML configuration file")->required();
    sub->add_option("--samples", samples, "CSV samples (x,y,value or lon,lat,value)")->required();
    sub->add_option("--mask", mask, "CSV water mask (ny rows of nx 0/1 cells)");
    sub->add_option("--out", out, "Output directory");
    sub->add_option("--detect-samples", detect_samples, "CSV readings to screen for anomalies");
  }
  CLI11_PARSE(app, argc, argv);

  coverfield::PipelineRequest request;
  request.command = *coverfield::parse_command(app.get_subcommands().front()->get_name());
  request.config = config;
  request.samples = samples;
  if (!mask.empty()) request.mask = mask;
  request.out_dir = out;
  if (!detect_samples.empty()) request.detect_samples = detect_samples;

  return coverfield::run_pipeline(request, std::cout, std::cerr);
}
