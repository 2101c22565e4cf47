#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

namespace shotscore {

// Every knob of the pipeline with its default. File values override the
// defaults, command-line flags override the file, and the merged result is
// archived next to each command's outputs as config.resolved.
struct RunConfig {
  std::uint64_t seed = 1;
  int epochs = 5;
  int batch_size = 16;

  int input_side = 256;   // network input; "desk" profile uses 32
  int resize_side = 284;  // pre-crop resize; "desk" profile uses 36
  int kernel = 5;
  int hidden_units = 10;
  double keep_prob = 0.5;

  double alpha = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  int shot_length = 50;
  int smooth_window = 1;  // 1 = smoothing stage disabled; 5 when enabled
  double summary_fraction = 0.15;
  std::string f_variant = "paper";
  double f_reference = 1.0;

  int train_count = 35;
  int test_count = 15;
  int min_train_per_genre = 3;
  int min_test_per_genre = 1;

  bool augment = true;
  double stop_loss = 0.0;        // stop when batch loss < value; 0 = off
  long long checkpoint_every = 0;  // iterations between checkpoints; 0 = off
};

// Assigns one key; unknown keys and unparsable values are config errors
// naming the key.
void set_config_key(RunConfig& cfg, const std::string& key,
                    const std::string& value);

// Applies `key = value` lines ('#' comments and blank lines ignored).
void apply_config_file(RunConfig& cfg, const std::filesystem::path& path);

// Range checks across all fields; messages name the offending field.
void validate_config(const RunConfig& cfg);

// Canonical sorted key=value rendering (loadable by apply_config_file).
std::string serialize_config(const RunConfig& cfg);

}  // namespace shotscore
