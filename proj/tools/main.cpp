#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#ifdef _OPENMP
#include <omp.h>
#endif

#include "shotscore/commands.hpp"
#include "shotscore/error.hpp"
#include "shotscore/runconfig.hpp"

namespace ss = shotscore;

namespace {

// The shared pipeline knobs, attachable to every subcommand. Defaults come
// from RunConfig, a --config file overrides them, and only flags the user
// actually passed override the file.
struct CommonFlags {
  std::string config_path;
  ss::RunConfig v;  // flag storage; fields read only when the flag was given
  bool augment_flag = true;
  CLI::Option *o_config, *o_seed, *o_epochs, *o_batch, *o_input, *o_resize,
      *o_frac, *o_fvar, *o_smooth, *o_fref, *o_alpha, *o_stop, *o_ckpt,
      *o_train_n, *o_test_n, *o_shot, *o_aug;

  void attach(CLI::App& app) {
    o_config = app.add_option("--config", config_path,
                              "config file with 'key = value' lines");
    o_seed = app.add_option("--seed", v.seed, "rng seed");
    o_epochs = app.add_option("--epochs", v.epochs, "training epochs");
    o_batch = app.add_option("--batch-size", v.batch_size, "mini-batch size");
    o_input = app.add_option("--input-side", v.input_side,
                             "network input side, multiple of 4");
    o_resize = app.add_option("--resize-side", v.resize_side,
                              "pre-crop resize side");
    o_frac = app.add_option("--summary-fraction", v.summary_fraction,
                            "fraction of shots kept in a summary");
    o_fvar = app.add_option("--f-variant", v.f_variant,
                            "F-measure definitions: paper or standard")
                 ->check(CLI::IsMember({"paper", "standard"}));
    o_smooth = app.add_option("--smooth-window", v.smooth_window,
                              "odd moving-average window, 1 disables");
    o_fref = app.add_option("--f-reference", v.f_reference,
                            "reference F for the relative measure");
    o_alpha = app.add_option("--alpha", v.alpha, "Adam learning rate");
    o_stop = app.add_option("--stop-loss", v.stop_loss,
                            "stop when batch loss drops below, 0 disables");
    o_ckpt = app.add_option("--checkpoint-every", v.checkpoint_every,
                            "iterations between checkpoints, 0 disables");
    o_train_n = app.add_option("--train-count", v.train_count,
                               "videos in the training split");
    o_test_n = app.add_option("--test-count", v.test_count,
                              "videos in the test split");
    o_shot = app.add_option("--shot-length", v.shot_length,
                            "frames per shot");
    o_aug = app.add_flag("--augment,!--no-augment", augment_flag,
                         "toggle training-time augmentation");
  }

  ss::RunConfig resolve() const {
    ss::RunConfig cfg;
    if (o_config->count()) ss::apply_config_file(cfg, config_path);
    if (o_seed->count()) cfg.seed = v.seed;
    if (o_epochs->count()) cfg.epochs = v.epochs;
    if (o_batch->count()) cfg.batch_size = v.batch_size;
    if (o_input->count()) cfg.input_side = v.input_side;
    if (o_resize->count()) cfg.resize_side = v.resize_side;
    if (o_frac->count()) cfg.summary_fraction = v.summary_fraction;
    if (o_fvar->count()) cfg.f_variant = v.f_variant;
    if (o_smooth->count()) cfg.smooth_window = v.smooth_window;
    if (o_fref->count()) cfg.f_reference = v.f_reference;
    if (o_alpha->count()) cfg.alpha = v.alpha;
    if (o_stop->count()) cfg.stop_loss = v.stop_loss;
    if (o_ckpt->count()) cfg.checkpoint_every = v.checkpoint_every;
    if (o_train_n->count()) cfg.train_count = v.train_count;
    if (o_test_n->count()) cfg.test_count = v.test_count;
    if (o_shot->count()) cfg.shot_length = v.shot_length;
    if (o_aug->count()) cfg.augment = augment_flag;
    return cfg;
  }
};

void apply_thread_cap() {
  const char* env = std::getenv("SHOTSCORE_THREADS");
  if (!env) return;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || n < 1)
    throw ss::ConfigError(
        "SHOTSCORE_THREADS must be a positive integer, got '" +
        std::string(env) + "'");
#ifdef _OPENMP
  omp_set_num_threads(static_cast<int>(n));
#else
  (void)n;
#endif
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"shot-importance scoring: train a frame-scoring CNN, predict "
               "per-frame importance, aggregate to shots, evaluate"};
  app.require_subcommand(1);

  auto* synth = app.add_subcommand(
      "synth", "generate a synthetic annotated dataset");
  CommonFlags cf_synth;
  cf_synth.attach(*synth);
  ss::SynthConfig sy;
  std::string synth_out;
  synth->add_option("--out", synth_out, "output directory")->required();
  synth->add_option("--videos", sy.n_videos, "number of videos");
  synth->add_option("--frames", sy.frames_per_video, "frames per video");
  synth->add_option("--side", sy.side, "frame side length");
  synth->add_option("--genres", sy.n_genres, "number of genres");
  synth->add_option("--noise", sy.noise, "texture amplitude");
  synth->add_option("--score-scale", sy.score_scale, "score scale L");

  auto* train = app.add_subcommand("train", "train the importance network");
  CommonFlags cf_train;
  cf_train.attach(*train);
  std::string train_manifest, train_annotations, train_out;
  train->add_option("--manifest", train_manifest, "dataset manifest JSON")
      ->required();
  train->add_option("--annotations", train_annotations,
                    "shot-score annotations CSV")
      ->required();
  train->add_option("--out", train_out, "output directory")->required();

  auto* predict = app.add_subcommand(
      "predict", "score every frame of the selected videos");
  CommonFlags cf_predict;
  cf_predict.attach(*predict);
  std::string pred_manifest, pred_annotations, pred_model, pred_split,
      pred_out;
  predict->add_option("--manifest", pred_manifest, "dataset manifest JSON")
      ->required();
  predict->add_option("--annotations", pred_annotations,
                      "shot-score annotations CSV")
      ->required();
  predict->add_option("--model", pred_model, "trained checkpoint")
      ->required();
  predict->add_option("--split", pred_split,
                      "split.json from training; limits scoring to its test "
                      "videos");
  predict->add_option("--out", pred_out, "output directory")->required();

  auto* evaluate = app.add_subcommand(
      "evaluate", "shot-level metrics from predicted score curves");
  CommonFlags cf_evaluate;
  cf_evaluate.attach(*evaluate);
  std::string eval_scores, eval_out;
  evaluate->add_option("--scores", eval_scores,
                       "directory of per-video score CSVs")
      ->required();
  evaluate->add_option("--out", eval_out, "output directory")->required();

  auto* summarize = app.add_subcommand(
      "summarize", "select summary shots from predicted score curves");
  CommonFlags cf_summarize;
  cf_summarize.attach(*summarize);
  std::string summ_scores, summ_out;
  summarize->add_option("--scores", summ_scores,
                        "directory of per-video score CSVs")
      ->required();
  summarize->add_option("--out", summ_out, "output directory")->required();

  auto* gradcheck = app.add_subcommand(
      "gradcheck", "finite-difference check of the backward pass");
  CommonFlags cf_gradcheck;
  cf_gradcheck.attach(*gradcheck);
  int gc_samples = 50;
  double gc_tolerance = 1e-4;
  gradcheck->add_option("--samples", gc_samples,
                        "parameter scalars to probe");
  gradcheck->add_option("--tolerance", gc_tolerance,
                        "max allowed relative error");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // non-help parse problems are config errors
  }

  try {
    apply_thread_cap();
    if (synth->parsed()) {
      cmd_synth(cf_synth.resolve(), sy, synth_out);
    } else if (train->parsed()) {
      ss::PathArgs p;
      p.manifest = train_manifest;
      p.annotations = train_annotations;
      p.out = train_out;
      cmd_train(cf_train.resolve(), p);
    } else if (predict->parsed()) {
      ss::PathArgs p;
      p.manifest = pred_manifest;
      p.annotations = pred_annotations;
      p.model = pred_model;
      p.split_file = pred_split;
      p.out = pred_out;
      cmd_predict(cf_predict.resolve(), p);
    } else if (evaluate->parsed()) {
      ss::PathArgs p;
      p.scores_dir = eval_scores;
      p.out = eval_out;
      cmd_evaluate(cf_evaluate.resolve(), p);
    } else if (summarize->parsed()) {
      ss::PathArgs p;
      p.scores_dir = summ_scores;
      p.out = summ_out;
      cmd_summarize(cf_summarize.resolve(), p);
    } else if (gradcheck->parsed()) {
      cmd_gradcheck(cf_gradcheck.resolve(), gc_samples, gc_tolerance);
    }
    return 0;
  } catch (const ss::ConfigError& e) {
    std::cerr << "shotscore: config error: " << e.what() << "\n";
    return 2;
  } catch (const ss::ValidationError& e) {
    std::cerr << "shotscore: validation error: " << e.what() << "\n";
    return 3;
  } catch (const ss::NumericError& e) {
    std::cerr << "shotscore: numeric error: " << e.what() << "\n";
    return 4;
  } catch (const ss::IoError& e) {
    std::cerr << "shotscore: i/o error: " << e.what() << "\n";
    return 5;
  } catch (const std::exception& e) {
    std::cerr << "shotscore: error: " << e.what() << "\n";
    return 1;
  }
}
