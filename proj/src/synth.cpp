#include "shotscore/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#include "json.hpp"
#include "shotscore/error.hpp"
#include "shotscore/tensor_io.hpp"
#include "shotscore/textio.hpp"

namespace shotscore {

VideoDataset synth_generate(const SynthConfig& config,
                            const std::filesystem::path& out_dir, Rng& rng) {
  if (config.n_videos < 0) throw ConfigError("n_videos must be >= 0");
  if (config.frames_per_video < 1)
    throw ConfigError("frames_per_video must be >= 1");
  if (config.side < 1) throw ConfigError("side must be >= 1");
  if (config.n_genres < 1) throw ConfigError("n_genres must be >= 1");
  if (config.noise < 0) throw ConfigError("noise must be >= 0");
  if (!(config.score_scale > 0))
    throw ConfigError("score_scale must be positive");

  std::filesystem::create_directories(out_dir);
  VideoDataset ds;
  ds.score_scale = config.score_scale;

  nlohmann::json manifest;
  manifest["score_scale"] = config.score_scale;
  manifest["videos"] = nlohmann::json::array();
  std::string annotations = "video_id,shot_index,score\n";

  const int side = config.side;
  for (int v = 0; v < config.n_videos; ++v) {
    char idbuf[16];
    std::snprintf(idbuf, sizeof idbuf, "synth%03d", v);
    VideoRecord rec;
    rec.video_id = idbuf;
    rec.genre = "g" + std::to_string(v % config.n_genres);
    std::filesystem::create_directories(out_dir / "frames" / rec.video_id);

    const int shots = shot_count(config.frames_per_video);
    for (int s = 0; s < shots; ++s) {
      const double u = rng.uniform(0.1, 0.9);
      rec.shot_scores.push_back(config.score_scale * u);
      annotations += rec.video_id + "," + std::to_string(s) + "," +
                     format_real(rec.shot_scores.back()) + "\n";
    }

    nlohmann::json frames = nlohmann::json::array();
    for (int f = 0; f < config.frames_per_video; ++f) {
      const double u =
          rec.shot_scores[static_cast<std::size_t>(f / kShotLength)] /
          config.score_scale;
      const int fx = rng.uniform_int(1, 4);
      const int fy = rng.uniform_int(1, 4);
      double phase[3];
      for (double& p : phase) p = rng.uniform(0.0, 2.0 * std::numbers::pi);

      Tensor<float> img({side, side, 3});
      const double k = 2.0 * std::numbers::pi / side;
      for (int y = 0; y < side; ++y)
        for (int x = 0; x < side; ++x)
          for (int c = 0; c < 3; ++c) {
            const double wave =
                config.noise * std::sin(k * (fx * x + fy * y) + phase[c]);
            img.at(y, x, c) = static_cast<float>(
                std::clamp(u + wave, 0.0, 1.0));
          }

      char fbuf[24];
      std::snprintf(fbuf, sizeof fbuf, "f%05d.ftns", f);
      const std::string rel =
          "frames/" + rec.video_id + "/" + std::string(fbuf);
      write_tensor((out_dir / rel).string(), img);
      frames.push_back(rel);
      rec.frame_paths.push_back(out_dir / rel);
    }

    manifest["videos"].push_back({{"video_id", rec.video_id},
                                  {"genre", rec.genre},
                                  {"frames", frames}});
    ds.videos.push_back(std::move(rec));
  }

  write_text_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
  write_text_file(out_dir / "annotations.csv", annotations);
  return ds;
}

}  // namespace shotscore
