#pragma once

#include <filesystem>

#include "shotscore/dataset.hpp"
#include "shotscore/rng.hpp"

namespace shotscore {

// Desk-scale synthetic stand-in for a real annotated corpus. Every shot gets
// a latent u ~ U[0.1, 0.9]; its ground-truth score is score_scale * u and its
// frames have mean brightness u plus a low-frequency sinusoidal texture of
// the given amplitude. Brightness therefore carries the importance signal,
// guaranteeing the regression target is learnable from pixels.
struct SynthConfig {
  int n_videos = 8;
  int frames_per_video = 250;
  int side = 32;
  int n_genres = 1;     // genre names g0, g1, ... assigned round-robin
  double noise = 0.05;  // texture amplitude; 0 makes every frame uniform
  double score_scale = 5.0;
};

// Writes manifest.json, annotations.csv and frames/<video>/fNNNNN.ftns under
// out_dir and returns the equivalent in-memory dataset. Byte-identical
// output for identical seed and config.
VideoDataset synth_generate(const SynthConfig& config,
                            const std::filesystem::path& out_dir, Rng& rng);

}  // namespace shotscore
