#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& tag) {
  const fs::path p = fs::temp_directory_path() / ("shotscore-cli-" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

// Runs the tool, captures stdout+stderr into log, returns the exit code.
int run(const std::string& args, const fs::path& log,
        const std::string& env_prefix = "") {
  const std::string cmd = env_prefix + "\"" + SHOTSCORE_BIN + "\" " + args +
                          " > \"" + log.string() + "\" 2>&1";
  const int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1);
  REQUIRE(WIFEXITED(rc));
  return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t line_count(const std::string& text) {
  std::size_t n = 0;
  for (const char c : text) n += c == '\n';
  return n;
}

nlohmann::json load_json(const fs::path& p) {
  REQUIRE(fs::exists(p));
  return nlohmann::json::parse(slurp(p));
}

}  // namespace

TEST_CASE("end-to-end pipeline on a small synthetic corpus") {
  const auto root = temp_dir("pipeline");
  const auto data = root / "data";
  const auto log = root / "log.txt";

  // 4 videos x 60 frames = 2 shots per video; side 8 keeps it quick.
  CHECK(run("synth --out \"" + data.string() +
                "\" --videos 4 --frames 60 --side 8 --noise 0.02 --seed 5",
            log) == 0);
  CHECK(fs::exists(data / "manifest.json"));
  CHECK(fs::exists(data / "annotations.csv"));
  CHECK(fs::exists(data / "config.resolved"));

  const auto run_dir = root / "run";
  const std::string io = " --manifest \"" + (data / "manifest.json").string() +
                         "\" --annotations \"" +
                         (data / "annotations.csv").string() + "\"";
  CHECK(run("train" + io + " --out \"" + run_dir.string() +
                "\" --train-count 3 --test-count 1 --input-side 8 "
                "--resize-side 12 --epochs 2 --batch-size 6 --seed 7 "
                "--checkpoint-every 5",
            log) == 0);
  CHECK(fs::exists(run_dir / "model.fckp"));
  CHECK(fs::exists(run_dir / "split.json"));
  CHECK(fs::exists(run_dir / "config.resolved"));
  CHECK(fs::exists(run_dir / "model-iter-5.fckp"));

  // 3 train videos x 12 sampled frames = 36 samples; batch 6 over 2 epochs.
  const std::string loss = slurp(run_dir / "loss.csv");
  CHECK(line_count(loss) == 13);  // header + 12 iterations
  CHECK(loss.rfind("iteration,epoch,batch_loss\n", 0) == 0);

  const auto sj = load_json(run_dir / "split.json");
  CHECK(sj["train"].size() == 3);
  CHECK(sj["test"].size() == 1);

  const auto pred = root / "pred";
  CHECK(run("predict" + io + " --model \"" +
                (run_dir / "model.fckp").string() + "\" --split \"" +
                (run_dir / "split.json").string() + "\" --out \"" +
                pred.string() +
                "\" --input-side 8 --resize-side 12 --seed 7",
            log) == 0);
  std::vector<fs::path> curves;
  for (const auto& e : fs::directory_iterator(pred / "scores"))
    curves.push_back(e.path());
  REQUIRE(curves.size() == 1);
  const std::string curve = slurp(curves[0]);
  CHECK(line_count(curve) == 61);  // header + one row per frame
  CHECK(curve.rfind("frame_index,predicted,smoothed,ground_truth\n", 0) == 0);
  CHECK(curves[0].stem().string() == sj["test"][0].get<std::string>());

  const auto eval = root / "eval";
  CHECK(run("evaluate --scores \"" + (pred / "scores").string() +
                "\" --out \"" + eval.string() + "\" --summary-fraction 0.5",
            log) == 0);
  const auto mean = load_json(eval / "metrics_mean.json");
  CHECK(mean["n_videos"] == 1);
  CHECK(mean["mae"].get<double>() >= 0.0);
  CHECK(mean["aev"].get<double>() >= 0.0);
  CHECK(fs::exists(eval / "metrics" /
                   (curves[0].stem().string() + ".json")));

  const auto summ = root / "summ";
  CHECK(run("summarize --scores \"" + (pred / "scores").string() +
                "\" --out \"" + summ.string() + "\" --summary-fraction 0.5",
            log) == 0);
  const auto mask = load_json(summ / (curves[0].stem().string() +
                                      ".summary.json"));
  CHECK(mask["selected"].size() == 2);  // 60 frames = 2 shots
  CHECK(mask["selected_count"] == 1);   // half of them kept
  CHECK(mask["fraction"].get<double>() == doctest::Approx(0.5));

  fs::remove_all(root);
}

TEST_CASE("invalid training config fails before any output is written") {
  const auto root = temp_dir("badtrain");
  const auto data = root / "data";
  const auto log = root / "log.txt";
  CHECK(run("synth --out \"" + data.string() +
                "\" --videos 4 --frames 10 --side 8 --seed 1",
            log) == 0);

  const auto out = root / "run";
  const int rc = run("train --manifest \"" +
                         (data / "manifest.json").string() +
                         "\" --annotations \"" +
                         (data / "annotations.csv").string() + "\" --out \"" +
                         out.string() +
                         "\" --batch-size 0 --input-side 8 --resize-side 8 "
                         "--train-count 3 --test-count 1",
                     log);
  CHECK(rc == 2);
  CHECK_FALSE(fs::exists(out));
  CHECK(slurp(log).find("config error") != std::string::npos);
  fs::remove_all(root);
}

TEST_CASE("evaluate reports perfect scores when curves match the truth") {
  const auto root = temp_dir("evalzero");
  const auto scores = root / "scores";
  fs::create_directories(scores);
  const auto log = root / "log.txt";

  // Two 50-frame shots; predicted == smoothed == ground truth.
  std::ofstream csv(scores / "clip.csv");
  csv << "frame_index,predicted,smoothed,ground_truth\n";
  for (int i = 0; i < 100; ++i) {
    const double v = i < 50 ? 1.0 : 3.0;
    csv << i << "," << v << "," << v << "," << v << "\n";
  }
  csv.close();

  const auto out = root / "eval";
  CHECK(run("evaluate --scores \"" + scores.string() + "\" --out \"" +
                out.string() +
                "\" --summary-fraction 0.5 --f-variant standard",
            log) == 0);
  const auto m = load_json(out / "metrics" / "clip.json");
  CHECK(m["mae"].get<double>() == 0.0);
  CHECK(m["aev"].get<double>() == 0.0);
  CHECK(m["precision"].get<double>() == 1.0);
  CHECK(m["recall"].get<double>() == 1.0);
  CHECK(m["f_measure"].get<double>() == 1.0);
  CHECK(m["relative_f"].get<double>() == 1.0);
  CHECK(m["variant"] == "standard");

  // The other convention scores the same perfect curves differently:
  // matched 1, |gt| 1, total 2 gives P 1, R 0.5, F 2/3.
  const auto out2 = root / "eval2";
  CHECK(run("evaluate --scores \"" + scores.string() + "\" --out \"" +
                out2.string() + "\" --summary-fraction 0.5 --f-variant paper",
            log) == 0);
  const auto m2 = load_json(out2 / "metrics" / "clip.json");
  CHECK(m2["mae"].get<double>() == 0.0);
  CHECK(m2["f_measure"].get<double>() == doctest::Approx(2.0 / 3.0));
  CHECK(m2["variant"] == "paper-literal");

  fs::remove_all(root);
}

TEST_CASE("gradcheck subcommand probes the backward pass") {
  const auto root = temp_dir("gradcheck");
  const auto log = root / "log.txt";
  CHECK(run("gradcheck --input-side 8 --resize-side 8 --samples 10 --seed 3",
            log) == 0);
  const auto text = slurp(log);
  CHECK(text.find("max relative error") != std::string::npos);
  fs::remove_all(root);
}

TEST_CASE("bad invocations exit with the config-error code") {
  const auto root = temp_dir("badargs");
  const auto log = root / "log.txt";
  CHECK(run("--frobnicate", log) == 2);
  CHECK(run("", log) == 2);  // a subcommand is required
  CHECK(run("synth", log) == 2);  // --out is required
  CHECK(run("--help", log) == 0);
  CHECK(run("train --help", log) == 0);
  fs::remove_all(root);
}

TEST_CASE("config file merges under explicit flags") {
  const auto root = temp_dir("config");
  const auto log = root / "log.txt";
  const auto cfg = root / "run.cfg";
  {
    std::ofstream out(cfg);
    out << "# defaults for the desk profile\n"
        << "epochs = 7\n"
        << "alpha = 0.5\n"
        << "smooth_window = 3\n";
  }
  const auto data = root / "data";
  CHECK(run("synth --config \"" + cfg.string() + "\" --epochs 2 --out \"" +
                data.string() + "\" --videos 0",
            log) == 0);
  const auto resolved = slurp(data / "config.resolved");
  CHECK(resolved.find("epochs = 2") != std::string::npos);       // flag wins
  CHECK(resolved.find("alpha = 0.5") != std::string::npos);      // file value
  CHECK(resolved.find("smooth_window = 3") != std::string::npos);
  CHECK(resolved.find("epochs = 7") == std::string::npos);

  {
    std::ofstream out(cfg);
    out << "warp_factor = 9\n";
  }
  CHECK(run("synth --config \"" + cfg.string() + "\" --out \"" +
                (root / "d2").string() + "\" --videos 0",
            log) == 2);
  CHECK(slurp(log).find("unknown config key") != std::string::npos);
  fs::remove_all(root);
}

TEST_CASE("worker thread cap rejects garbage") {
  const auto root = temp_dir("threads");
  const auto log = root / "log.txt";
  CHECK(run("synth --out \"" + (root / "d").string() + "\" --videos 0", log,
            "SHOTSCORE_THREADS=abc ") == 2);
  CHECK(slurp(log).find("SHOTSCORE_THREADS") != std::string::npos);
  CHECK(run("synth --out \"" + (root / "d").string() + "\" --videos 0", log,
            "SHOTSCORE_THREADS=1 ") == 0);
  fs::remove_all(root);
}

TEST_CASE("missing inputs map to the i/o and validation exit codes") {
  const auto root = temp_dir("iofail");
  const auto log = root / "log.txt";
  CHECK(run("train --manifest \"" + (root / "absent.json").string() +
                "\" --annotations \"" + (root / "absent.csv").string() +
                "\" --out \"" + (root / "o").string() + "\"",
            log) == 5);

  const auto empty = root / "empty";
  fs::create_directories(empty);
  CHECK(run("evaluate --scores \"" + empty.string() + "\" --out \"" +
                (root / "e").string() + "\"",
            log) == 3);
  fs::remove_all(root);
}
