#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace shotscore {

// Per-frame predictions for one video.
struct FrameScoreSeries {
  std::string video_id;
  std::vector<double> scores;
};

// One value per consecutive shot_length-frame block (last may be partial).
struct ShotScoreSeries {
  std::string video_id;
  int shot_length = 50;
  std::vector<double> scores;
};

// Per-shot keep/drop decision; fraction is selected/total exactly.
struct SummaryMask {
  std::vector<bool> selected;
  double fraction = 0.0;
};

enum class FVariant { paper_literal, standard };
std::string to_string(FVariant v);
FVariant f_variant_from_string(const std::string& s);

struct MetricsReport {
  std::string video_id;
  double mae = 0.0;
  double aev = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;
  double relative_f = 0.0;
  FVariant variant = FVariant::paper_literal;
};

// Centered moving average with truncated windows at the edges; window must
// be odd and window 1 is the identity. An optional stage, off (window 1) in
// the pipeline unless configured; window 5 is the conventional choice.
FrameScoreSeries smooth(const FrameScoreSeries& s, int window = 5);

// Per block: sort, drop the floor(0.1*n) smallest and largest values, then
// take the root mean square of the remainder. Blocks under 10 frames lose
// nothing. This turns a frame curve into per-shot importance.
ShotScoreSeries aggregate_shots(const FrameScoreSeries& s,
                                int shot_length = 50);

// (mean absolute error, population variance of the absolute errors).
std::pair<double, double> error_metrics(const ShotScoreSeries& pred,
                                        const ShotScoreSeries& gt);

// Keeps the round(target_fraction * n) highest-scoring shots; ties at the
// threshold go to the earlier shot index.
SummaryMask select_summary(const ShotScoreSeries& s, double target_fraction);

struct FScore {
  double precision = 0.0;
  double recall = 0.0;
  double f = 0.0;
};

// matched = |pred AND gt|. standard: precision = matched/|pred|, recall =
// matched/|gt|. paper_literal: precision = matched/|gt|, recall =
// matched/total. f = 2PR/(P+R), zero when P+R = 0.
FScore f_measure(const SummaryMask& pred, const SummaryMask& gt,
                 FVariant variant);

// Normalizes an F score by an externally supplied reference value.
double relative_f(double f_method, double f_reference);

// Plot-ready per-frame curve: header frame_index,predicted,smoothed,
// ground_truth.
struct ScoreCurve {
  std::string video_id;
  std::vector<double> predicted;
  std::vector<double> smoothed;
  std::vector<double> ground_truth;
};

void write_score_csv(const std::filesystem::path& path, const ScoreCurve& c);
ScoreCurve read_score_csv(const std::filesystem::path& path);

std::string metrics_to_json(const MetricsReport& r);

}  // namespace shotscore
