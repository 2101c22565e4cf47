#include "shotscore/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>

#include "json.hpp"
#include "shotscore/checkpoint.hpp"
#include "shotscore/dataset.hpp"
#include "shotscore/error.hpp"
#include "shotscore/gradcheck.hpp"
#include "shotscore/network.hpp"
#include "shotscore/preprocess.hpp"
#include "shotscore/scoring.hpp"
#include "shotscore/textio.hpp"
#include "shotscore/train.hpp"

namespace shotscore {

namespace {

namespace fs = std::filesystem;

// The network clamp works on an integer scale, so the manifest's score_scale
// must be a whole number.
int scale_to_int(double score_scale) {
  const double r = std::round(score_scale);
  if (!(score_scale > 0) || std::abs(score_scale - r) > 1e-9 || r > 1e6)
    throw ConfigError("score_scale must be a positive whole number, got " +
                      format_real(score_scale));
  return static_cast<int>(r);
}

ModelConfig model_config_from(const RunConfig& cfg, double score_scale) {
  ModelConfig mc;
  mc.kernel = cfg.kernel;
  mc.hidden_units = cfg.hidden_units;
  mc.keep_prob = cfg.keep_prob;
  mc.scale.L = scale_to_int(score_scale);
  return mc;
}

// config.resolved: the merged RunConfig plus the command's inputs as
// comments, so any output folder documents how it was produced.
void archive_config(const RunConfig& cfg, const fs::path& out,
                    const std::vector<std::pair<std::string, std::string>>&
                        extras = {}) {
  std::string text;
  for (const auto& [k, v] : extras) text += "# " + k + " = " + v + "\n";
  text += serialize_config(cfg);
  write_text_file(out / "config.resolved", text);
}

std::vector<fs::path> list_score_csvs(const fs::path& dir) {
  if (!fs::is_directory(dir))
    throw IoError("score directory not found: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".csv")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  if (files.empty())
    throw ValidationError("no score CSVs in " + dir.string());
  return files;
}

void require(const fs::path& p, const char* flag) {
  if (p.empty())
    throw ConfigError(std::string(flag) + " is required for this command");
}

}  // namespace

void cmd_synth(const RunConfig& cfg, const SynthConfig& synth,
               const fs::path& out) {
  validate_config(cfg);
  require(out, "--out");
  Rng rng(cfg.seed);
  const VideoDataset ds = synth_generate(synth, out, rng);
  archive_config(cfg, out,
                 {{"command", "synth"},
                  {"videos", std::to_string(synth.n_videos)},
                  {"frames_per_video", std::to_string(synth.frames_per_video)},
                  {"side", std::to_string(synth.side)},
                  {"genres", std::to_string(synth.n_genres)},
                  {"noise", format_real(synth.noise)},
                  {"score_scale", format_real(synth.score_scale)}});
  std::cout << "synth: wrote " << ds.videos.size() << " videos under "
            << out.string() << "\n";
}

void cmd_train(const RunConfig& cfg, const PathArgs& paths) {
  validate_config(cfg);
  require(paths.manifest, "--manifest");
  require(paths.annotations, "--annotations");
  require(paths.out, "--out");

  const VideoDataset ds = ingest(paths.manifest, paths.annotations);
  const ModelConfig mc = model_config_from(cfg, ds.score_scale);

  Rng rng(cfg.seed);
  const SplitConfig sc{cfg.train_count, cfg.test_count,
                       cfg.min_train_per_genre, cfg.min_test_per_genre};
  const auto [train_ds, test_ds] = split(ds, sc, rng);
  if (train_ds.videos.empty())
    throw ValidationError("split produced an empty training set");

  const auto samples =
      build_training_set(train_ds, cfg.resize_side, cfg.input_side);

  auto net = build_network<float>(cfg.input_side, 3, mc);
  glorot_init(net, rng);

  fs::create_directories(paths.out);
  archive_config(cfg, paths.out,
                 {{"command", "train"},
                  {"manifest", paths.manifest.string()},
                  {"annotations", paths.annotations.string()}});

  nlohmann::json sj;
  sj["train"] = nlohmann::json::array();
  sj["test"] = nlohmann::json::array();
  for (const auto& v : train_ds.videos) sj["train"].push_back(v.video_id);
  for (const auto& v : test_ds.videos) sj["test"].push_back(v.video_id);
  write_text_file(paths.out / "split.json", sj.dump(2) + "\n");

  TrainConfig tc;
  tc.epochs = cfg.epochs;
  tc.batch_size = cfg.batch_size;
  tc.augment = cfg.augment;
  tc.stop_loss = cfg.stop_loss;
  tc.checkpoint_every = cfg.checkpoint_every;
  tc.adam = AdamConfig{cfg.alpha, cfg.beta1, cfg.beta2, cfg.epsilon};

  const fs::path out = paths.out;
  const auto run = train<float>(
      net, samples, tc, rng,
      [&out](Network<float>& n, long long iteration) {
        checkpoint_save(n, (out / ("model-iter-" +
                                   std::to_string(iteration) + ".fckp"))
                               .string());
      });

  std::string loss_csv = "iteration,epoch,batch_loss\n";
  for (const auto& e : run.log)
    loss_csv += std::to_string(e.iteration) + "," + std::to_string(e.epoch) +
                "," + format_real(e.batch_loss) + "\n";
  write_text_file(paths.out / "loss.csv", loss_csv);
  checkpoint_save(net, (paths.out / "model.fckp").string());

  std::cout << "train: " << samples.size() << " samples, "
            << run.log.size() << " iterations";
  if (!run.log.empty())
    std::cout << ", final batch loss " << format_real(run.log.back().batch_loss);
  if (run.stopped_early) std::cout << " (stopped early)";
  std::cout << "\n";
}

void cmd_predict(const RunConfig& cfg, const PathArgs& paths) {
  validate_config(cfg);
  require(paths.manifest, "--manifest");
  require(paths.annotations, "--annotations");
  require(paths.model, "--model");
  require(paths.out, "--out");

  const VideoDataset ds = ingest(paths.manifest, paths.annotations);
  const ModelConfig mc = model_config_from(cfg, ds.score_scale);

  // Default to every video; a split file narrows prediction to its test set.
  std::vector<const VideoRecord*> selected;
  if (!paths.split_file.empty()) {
    std::ifstream in(paths.split_file);
    if (!in) throw IoError("cannot open split file " +
                           paths.split_file.string());
    nlohmann::json sj;
    try {
      in >> sj;
    } catch (const nlohmann::json::exception& e) {
      throw FormatError("split file is not valid JSON: " +
                        std::string(e.what()));
    }
    if (!sj.is_object() || !sj.contains("test") || !sj["test"].is_array())
      throw FormatError("split file must contain a 'test' array");
    for (const auto& jid : sj["test"]) {
      if (!jid.is_string())
        throw FormatError("split file test entries must be video_id strings");
      const std::string id = jid.get<std::string>();
      const auto it = std::find_if(
          ds.videos.begin(), ds.videos.end(),
          [&id](const VideoRecord& v) { return v.video_id == id; });
      if (it == ds.videos.end())
        throw ValidationError("split file names unknown video_id '" + id +
                              "'");
      selected.push_back(&*it);
    }
  } else {
    for (const auto& v : ds.videos) selected.push_back(&v);
  }
  std::sort(selected.begin(), selected.end(),
            [](const VideoRecord* a, const VideoRecord* b) {
              return a->video_id < b->video_id;
            });

  auto net = checkpoint_load<float>(paths.model.string(), cfg.input_side, 3,
                                    mc);
  net.set_mode(Mode::eval);

  fs::create_directories(paths.out / "scores");
  archive_config(cfg, paths.out,
                 {{"command", "predict"},
                  {"manifest", paths.manifest.string()},
                  {"annotations", paths.annotations.string()},
                  {"model", paths.model.string()},
                  {"split", paths.split_file.string()}});

  for (const VideoRecord* v : selected) {
    ScoreCurve c;
    c.video_id = v->video_id;
    for (const auto& path : v->frame_paths) {
      const Tensor<float> x =
          preprocess(load_frame(path), cfg.resize_side, cfg.input_side);
      c.predicted.push_back(static_cast<double>(net.forward(x)));
    }
    c.smoothed =
        smooth({v->video_id, c.predicted}, cfg.smooth_window).scores;
    for (std::size_t i = 0; i < v->frame_paths.size(); ++i)
      c.ground_truth.push_back(
          v->shot_scores[i / static_cast<std::size_t>(kShotLength)]);
    write_score_csv(paths.out / "scores" / (v->video_id + ".csv"), c);
  }
  std::cout << "predict: wrote " << selected.size() << " score curves under "
            << (paths.out / "scores").string() << "\n";
}

void cmd_evaluate(const RunConfig& cfg, const PathArgs& paths) {
  validate_config(cfg);
  require(paths.scores_dir, "--scores");
  require(paths.out, "--out");
  const FVariant variant = f_variant_from_string(cfg.f_variant);
  const auto files = list_score_csvs(paths.scores_dir);

  fs::create_directories(paths.out / "metrics");
  archive_config(cfg, paths.out,
                 {{"command", "evaluate"},
                  {"scores", paths.scores_dir.string()}});

  MetricsReport mean;
  mean.variant = variant;
  for (const auto& file : files) {
    const ScoreCurve c = read_score_csv(file);
    const auto pred =
        aggregate_shots({c.video_id, c.smoothed}, cfg.shot_length);
    const auto gt =
        aggregate_shots({c.video_id, c.ground_truth}, cfg.shot_length);
    const auto [mae, aev] = error_metrics(pred, gt);
    const auto fsc =
        f_measure(select_summary(pred, cfg.summary_fraction),
                  select_summary(gt, cfg.summary_fraction), variant);

    MetricsReport r;
    r.video_id = c.video_id;
    r.mae = mae;
    r.aev = aev;
    r.precision = fsc.precision;
    r.recall = fsc.recall;
    r.f_measure = fsc.f;
    r.relative_f = relative_f(fsc.f, cfg.f_reference);
    r.variant = variant;
    write_text_file(paths.out / "metrics" / (c.video_id + ".json"),
                    metrics_to_json(r));

    mean.mae += r.mae;
    mean.aev += r.aev;
    mean.precision += r.precision;
    mean.recall += r.recall;
    mean.f_measure += r.f_measure;
    mean.relative_f += r.relative_f;
  }
  const auto n = static_cast<double>(files.size());
  nlohmann::json mj;
  mj["n_videos"] = files.size();
  mj["mae"] = mean.mae / n;
  mj["aev"] = mean.aev / n;
  mj["precision"] = mean.precision / n;
  mj["recall"] = mean.recall / n;
  mj["f_measure"] = mean.f_measure / n;
  mj["relative_f"] = mean.relative_f / n;
  mj["variant"] = to_string(variant);
  write_text_file(paths.out / "metrics_mean.json", mj.dump(2) + "\n");

  std::cout << "evaluate: " << files.size() << " videos, mean MAE "
            << format_real(mean.mae / n) << ", mean relative F "
            << format_real(mean.relative_f / n) << "\n";
}

void cmd_summarize(const RunConfig& cfg, const PathArgs& paths) {
  validate_config(cfg);
  require(paths.scores_dir, "--scores");
  require(paths.out, "--out");
  const auto files = list_score_csvs(paths.scores_dir);

  fs::create_directories(paths.out);
  archive_config(cfg, paths.out,
                 {{"command", "summarize"},
                  {"scores", paths.scores_dir.string()}});

  for (const auto& file : files) {
    const ScoreCurve c = read_score_csv(file);
    const auto shots =
        aggregate_shots({c.video_id, c.smoothed}, cfg.shot_length);
    const SummaryMask mask = select_summary(shots, cfg.summary_fraction);

    nlohmann::json j;
    j["video_id"] = c.video_id;
    j["shot_length"] = cfg.shot_length;
    j["target_fraction"] = cfg.summary_fraction;
    j["fraction"] = mask.fraction;
    j["selected"] = nlohmann::json::array();
    std::size_t count = 0;
    for (const bool b : mask.selected) {
      j["selected"].push_back(b);
      count += b;
    }
    j["selected_count"] = count;
    write_text_file(paths.out / (c.video_id + ".summary.json"),
                    j.dump(2) + "\n");
  }
  std::cout << "summarize: wrote " << files.size() << " summary masks under "
            << paths.out.string() << "\n";
}

void cmd_gradcheck(const RunConfig& cfg, int samples, double tolerance) {
  validate_config(cfg);
  if (samples < 1) throw ConfigError("--samples must be >= 1");
  if (!(tolerance > 0)) throw ConfigError("--tolerance must be positive");

  ModelConfig mc;
  mc.kernel = cfg.kernel;
  mc.hidden_units = cfg.hidden_units;
  mc.keep_prob = cfg.keep_prob;

  Rng rng(cfg.seed);
  auto net = build_network<double>(cfg.input_side, 3, mc);
  glorot_init(net, rng);

  Tensor<double> frame({cfg.input_side, cfg.input_side, 3});
  for (std::size_t i = 0; i < frame.size(); ++i) frame[i] = rng.uniform();
  const double target =
      rng.uniform(0.0, static_cast<double>(mc.scale.L));

  const GradcheckReport rep = gradcheck(net, frame, target, samples, rng);
  char line[160];
  std::snprintf(line, sizeof line,
                "gradcheck: max relative error %.3e over %d sampled "
                "parameters (tolerance %.1e)",
                rep.max_rel_err, rep.checked, tolerance);
  std::cout << line << "\n";
  if (rep.max_rel_err > tolerance)
    throw NumericError("gradient check failed: max relative error " +
                       format_real(rep.max_rel_err) + " exceeds tolerance " +
                       format_real(tolerance));
}

}  // namespace shotscore
