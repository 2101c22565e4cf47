#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "shotscore/rng.hpp"
#include "shotscore/tensor.hpp"
#include "shotscore/train.hpp"

namespace shotscore {

// One video: ordered frame tensor files plus one ground-truth importance
// score per 50-frame shot (the last shot may be shorter).
struct VideoRecord {
  std::string video_id;
  std::string genre;
  std::vector<std::filesystem::path> frame_paths;
  std::vector<double> shot_scores;
};

struct VideoDataset {
  double score_scale = 5.0;  // L; all scores lie in [0, L]
  std::vector<VideoRecord> videos;
};

inline constexpr int kShotLength = 50;
inline constexpr int kFrameStride = 5;  // train on the first of every 5 frames

// Number of shots covering n frames (last one possibly partial).
int shot_count(int n_frames, int shot_length = kShotLength);

// Joins the manifest JSON with the annotations CSV. Frame paths in the
// manifest are resolved relative to the manifest's directory. Fails with a
// distinct message for each defect: duplicate/unknown video_id, shot-count
// mismatch, score outside [0, L].
VideoDataset ingest(const std::filesystem::path& manifest_path,
                    const std::filesystem::path& annotations_path);

struct SplitConfig {
  int train_count = 35;
  int test_count = 15;
  int min_train_per_genre = 3;
  int min_test_per_genre = 1;
};

// Disjoint, exhaustive train/test partition honoring per-genre minimums,
// deterministic given the rng seed. Infeasible counts are a config error.
std::pair<VideoDataset, VideoDataset> split(const VideoDataset& ds,
                                            const SplitConfig& config,
                                            Rng& rng);

// Training uses the first frame of every strip of five consecutive frames;
// each sampled frame's target is the score of its enclosing shot. Test-time
// prediction keeps every frame.
std::vector<std::pair<int, double>> sample_training_frames(
    const VideoRecord& v);

// Reads one frame tensor (HxWx3 float32, values in [0,1]).
Tensor<float> load_frame(const std::filesystem::path& path);

// Loads, resizes and crops every sampled training frame of every video.
std::vector<TrainSample<float>> build_training_set(const VideoDataset& ds,
                                                   int resize_side,
                                                   int crop_side);

}  // namespace shotscore
