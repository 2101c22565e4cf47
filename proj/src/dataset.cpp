#include "shotscore/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include "json.hpp"
#include "shotscore/error.hpp"
#include "shotscore/preprocess.hpp"
#include "shotscore/tensor_io.hpp"
#include "shotscore/textio.hpp"

namespace shotscore {

int shot_count(int n_frames, int shot_length) {
  if (n_frames < 0 || shot_length < 1)
    throw ValidationError("shot_count needs n_frames >= 0 and shot_length >= 1");
  return (n_frames + shot_length - 1) / shot_length;
}

VideoDataset ingest(const std::filesystem::path& manifest_path,
                    const std::filesystem::path& annotations_path) {
  std::ifstream in(manifest_path);
  if (!in) throw IoError("cannot open manifest " + manifest_path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("manifest " + manifest_path.string() +
                      " is not valid JSON: " + e.what());
  }
  if (!j.is_object() || !j.contains("score_scale") || !j.contains("videos"))
    throw FormatError("manifest must be an object with score_scale and videos");
  if (!j["score_scale"].is_number())
    throw FormatError("manifest score_scale must be a number");
  if (!j["videos"].is_array())
    throw FormatError("manifest videos must be an array");

  VideoDataset ds;
  ds.score_scale = j["score_scale"].get<double>();
  if (!(ds.score_scale > 0))
    throw ValidationError("manifest score_scale must be positive");

  const std::filesystem::path base = manifest_path.parent_path();
  for (const auto& jv : j["videos"]) {
    if (!jv.is_object() || !jv.contains("video_id") || !jv.contains("genre") ||
        !jv.contains("frames"))
      throw FormatError("each manifest video needs video_id, genre, frames");
    VideoRecord rec;
    if (!jv["video_id"].is_string() ||
        (rec.video_id = jv["video_id"].get<std::string>()).empty())
      throw FormatError("manifest video_id must be a non-empty string");
    if (!jv["genre"].is_string() ||
        (rec.genre = jv["genre"].get<std::string>()).empty())
      throw FormatError("manifest genre must be a non-empty string");
    if (!jv["frames"].is_array())
      throw FormatError("manifest frames must be an array of paths");
    for (const auto& jf : jv["frames"]) {
      if (!jf.is_string())
        throw FormatError("manifest frame entries must be path strings");
      rec.frame_paths.push_back(base / jf.get<std::string>());
    }
    for (const auto& prev : ds.videos)
      if (prev.video_id == rec.video_id)
        throw ValidationError("duplicate video_id '" + rec.video_id +
                              "' in manifest");
    ds.videos.push_back(std::move(rec));
  }

  // Annotations: one score per (video, shot), any row order.
  const auto lines = read_lines(annotations_path);
  if (lines.empty() || lines[0] != "video_id,shot_index,score")
    throw FormatError(
        "annotations must start with header 'video_id,shot_index,score'");

  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < ds.videos.size(); ++i)
    index[ds.videos[i].video_id] = i;
  std::vector<std::vector<bool>> seen(ds.videos.size());
  for (std::size_t i = 0; i < ds.videos.size(); ++i) {
    const int shots =
        shot_count(static_cast<int>(ds.videos[i].frame_paths.size()));
    ds.videos[i].shot_scores.assign(shots, 0.0);
    seen[i].assign(shots, false);
  }

  for (std::size_t ln = 1; ln < lines.size(); ++ln) {
    if (lines[ln].empty()) continue;
    const auto fields = split_csv(lines[ln]);
    if (fields.size() != 3)
      throw FormatError("annotations line " + std::to_string(ln + 1) +
                        " needs 3 fields, got " +
                        std::to_string(fields.size()));
    const auto it = index.find(fields[0]);
    if (it == index.end())
      throw ValidationError("annotations reference unknown video_id '" +
                            fields[0] + "'");
    VideoRecord& rec = ds.videos[it->second];
    const long long shot = parse_int(fields[1], "shot_index");
    const int shots = static_cast<int>(rec.shot_scores.size());
    if (shot < 0 || shot >= shots)
      throw ValidationError(
          "video '" + rec.video_id + "' has " +
          std::to_string(rec.frame_paths.size()) + " frames (" +
          std::to_string(shots) + " shots) but annotations name shot_index " +
          std::to_string(shot));
    if (seen[it->second][static_cast<std::size_t>(shot)])
      throw ValidationError("duplicate annotation for video '" +
                            rec.video_id + "' shot " + std::to_string(shot));
    const double score = parse_real(fields[2], "score");
    if (score < 0.0 || score > ds.score_scale)
      throw ValidationError("score " + fields[2] + " for video '" +
                            rec.video_id + "' shot " + std::to_string(shot) +
                            " is outside [0, " +
                            format_real(ds.score_scale) + "]");
    rec.shot_scores[static_cast<std::size_t>(shot)] = score;
    seen[it->second][static_cast<std::size_t>(shot)] = true;
  }

  for (std::size_t i = 0; i < ds.videos.size(); ++i) {
    const auto have = static_cast<std::size_t>(
        std::count(seen[i].begin(), seen[i].end(), true));
    if (have != seen[i].size())
      throw ValidationError(
          "video '" + ds.videos[i].video_id + "' has " +
          std::to_string(ds.videos[i].frame_paths.size()) +
          " frames requiring " + std::to_string(seen[i].size()) +
          " shot scores, annotations provide " + std::to_string(have));
  }
  return ds;
}

std::pair<VideoDataset, VideoDataset> split(const VideoDataset& ds,
                                            const SplitConfig& config,
                                            Rng& rng) {
  if (config.train_count < 0 || config.test_count < 0 ||
      config.min_train_per_genre < 0 || config.min_test_per_genre < 0)
    throw ConfigError("split counts must be non-negative");
  const auto n = ds.videos.size();
  if (static_cast<std::size_t>(config.train_count) +
          static_cast<std::size_t>(config.test_count) !=
      n)
    throw ConfigError("split counts " + std::to_string(config.train_count) +
                      "+" + std::to_string(config.test_count) +
                      " do not cover the " + std::to_string(n) + " videos");

  // Genres in name order, members in manifest order: a canonical layout so
  // the shuffles below are the only seed-dependent part.
  std::map<std::string, std::vector<std::size_t>> genres;
  for (std::size_t i = 0; i < n; ++i)
    genres[ds.videos[i].genre].push_back(i);

  const std::size_t g = genres.size();
  const std::size_t need = static_cast<std::size_t>(
      config.min_train_per_genre + config.min_test_per_genre);
  for (const auto& [name, members] : genres)
    if (members.size() < need)
      throw ConfigError("genre '" + name + "' has " +
                        std::to_string(members.size()) + " videos but " +
                        std::to_string(need) + " are needed per genre");
  if (static_cast<std::size_t>(config.min_train_per_genre) * g >
          static_cast<std::size_t>(config.train_count) ||
      static_cast<std::size_t>(config.min_test_per_genre) * g >
          static_cast<std::size_t>(config.test_count))
    throw ConfigError("per-genre minimums exceed the split counts for " +
                      std::to_string(g) + " genres");

  std::vector<bool> in_train(n, false), in_test(n, false);
  std::vector<std::size_t> pool;
  for (auto& [name, members] : genres) {
    rng.shuffle(members);
    std::size_t k = 0;
    for (int c = 0; c < config.min_train_per_genre; ++c)
      in_train[members[k++]] = true;
    for (int c = 0; c < config.min_test_per_genre; ++c)
      in_test[members[k++]] = true;
    for (; k < members.size(); ++k) pool.push_back(members[k]);
  }
  rng.shuffle(pool);
  std::size_t more_train = static_cast<std::size_t>(config.train_count) -
                           static_cast<std::size_t>(config.min_train_per_genre) * g;
  for (const std::size_t idx : pool) {
    if (more_train > 0) {
      in_train[idx] = true;
      --more_train;
    } else {
      in_test[idx] = true;
    }
  }

  VideoDataset train, test;
  train.score_scale = test.score_scale = ds.score_scale;
  for (std::size_t i = 0; i < n; ++i) {
    if (in_train[i]) train.videos.push_back(ds.videos[i]);
    if (in_test[i]) test.videos.push_back(ds.videos[i]);
  }
  return {std::move(train), std::move(test)};
}

std::vector<std::pair<int, double>> sample_training_frames(
    const VideoRecord& v) {
  std::vector<std::pair<int, double>> out;
  const int n = static_cast<int>(v.frame_paths.size());
  for (int idx = 0; idx < n; idx += kFrameStride)
    out.emplace_back(idx, v.shot_scores[static_cast<std::size_t>(
                              idx / kShotLength)]);
  return out;
}

Tensor<float> load_frame(const std::filesystem::path& path) {
  Tensor<float> t = read_tensor<float>(path.string());
  if (t.rank() != 3 || t.dims()[2] != 3)
    throw ValidationError("frame tensor " + path.string() +
                          " must be HxWx3, got " + dims_to_string(t.dims()));
  return t;
}

std::vector<TrainSample<float>> build_training_set(const VideoDataset& ds,
                                                   int resize_side,
                                                   int crop_side) {
  std::vector<TrainSample<float>> samples;
  for (const auto& v : ds.videos) {
    for (const auto& [idx, target] : sample_training_frames(v)) {
      Tensor<float> frame =
          load_frame(v.frame_paths[static_cast<std::size_t>(idx)]);
      samples.push_back({preprocess(frame, resize_side, crop_side),
                         static_cast<float>(target)});
    }
  }
  return samples;
}

}  // namespace shotscore
