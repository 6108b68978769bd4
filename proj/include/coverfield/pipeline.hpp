#pragma once

// Stage orchestration behind the `coverfield` CLI.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "coverfield/error.hpp"

namespace coverfield {

enum class Command { Fit, CoverageMap, Plan, Detect, Pipeline };

std::optional<Command> parse_command(std::string_view name);

struct PipelineRequest {
  Command command = Command::Pipeline;
  std::filesystem::path config;
  std::filesystem::path samples;
  std::optional<std::filesystem::path> mask;  ///< all-water when absent
  std::filesystem::path out_dir = ".";
  std::optional<std::filesystem::path> detect_samples;
};

/// Error raised by a named pipeline stage.
class StageError : public Error {
 public:
  StageError(std::string stage, Errc code, const std::string& what)
      : Error(code, what), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

/// Runs the stages the command needs and writes its artifacts into out_dir:
/// fit.txt, gradient.{csv,pgm,legend.txt}, coverage.{csv,pgm,legend.txt},
/// plan.json, anomalies.csv. Throws StageError.
void execute(const PipelineRequest& request, std::ostream& log);

/// execute() with failures reported on `err`; returns the process exit status.
int run_pipeline(const PipelineRequest& request, std::ostream& log, std::ostream& err);

}  // namespace coverfield
