#pragma once

#include <filesystem>
#include <string>

#include "shotscore/runconfig.hpp"
#include "shotscore/synth.hpp"

namespace shotscore {

// Input/output locations for the pipeline commands; which fields are used
// depends on the command.
struct PathArgs {
  std::filesystem::path manifest;
  std::filesystem::path annotations;
  std::filesystem::path model;       // checkpoint to load
  std::filesystem::path split_file;  // split.json from a training run
  std::filesystem::path scores_dir;  // per-video score CSVs
  std::filesystem::path out;         // output root for this command
};

// Each command validates everything first, then writes its artifacts under
// paths.out (plus config.resolved documenting the run). Errors are thrown;
// the executable maps them to exit codes.
void cmd_synth(const RunConfig& cfg, const SynthConfig& synth,
               const std::filesystem::path& out);
void cmd_train(const RunConfig& cfg, const PathArgs& paths);
void cmd_predict(const RunConfig& cfg, const PathArgs& paths);
void cmd_evaluate(const RunConfig& cfg, const PathArgs& paths);
void cmd_summarize(const RunConfig& cfg, const PathArgs& paths);
// Prints the max relative error; throws NumericError above tolerance.
void cmd_gradcheck(const RunConfig& cfg, int samples, double tolerance);

}  // namespace shotscore
