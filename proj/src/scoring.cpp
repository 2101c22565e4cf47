#include "shotscore/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "json.hpp"
#include "shotscore/error.hpp"
#include "shotscore/textio.hpp"

namespace shotscore {

std::string to_string(FVariant v) {
  return v == FVariant::standard ? "standard" : "paper-literal";
}

FVariant f_variant_from_string(const std::string& s) {
  if (s == "standard") return FVariant::standard;
  if (s == "paper" || s == "paper-literal") return FVariant::paper_literal;
  throw ConfigError("f_variant must be 'paper' or 'standard', got '" + s +
                    "'");
}

FrameScoreSeries smooth(const FrameScoreSeries& s, int window) {
  if (window < 1 || window % 2 == 0)
    throw ConfigError("smooth window must be odd and >= 1, got " +
                      std::to_string(window));
  if (window == 1) return s;
  const int n = static_cast<int>(s.scores.size());
  const int half = window / 2;
  FrameScoreSeries out{s.video_id, std::vector<double>(s.scores.size())};
  for (int i = 0; i < n; ++i) {
    const int lo = std::max(0, i - half);
    const int hi = std::min(n - 1, i + half);
    double sum = 0.0;
    for (int k = lo; k <= hi; ++k) sum += s.scores[static_cast<std::size_t>(k)];
    out.scores[static_cast<std::size_t>(i)] = sum / (hi - lo + 1);
  }
  return out;
}

ShotScoreSeries aggregate_shots(const FrameScoreSeries& s, int shot_length) {
  if (shot_length < 1) throw ConfigError("shot_length must be >= 1");
  if (s.scores.empty())
    throw ValidationError("cannot aggregate an empty score series");

  ShotScoreSeries out;
  out.video_id = s.video_id;
  out.shot_length = shot_length;
  const std::size_t n = s.scores.size();
  for (std::size_t start = 0; start < n;
       start += static_cast<std::size_t>(shot_length)) {
    const std::size_t stop =
        std::min(n, start + static_cast<std::size_t>(shot_length));
    std::vector<double> block(s.scores.begin() + static_cast<std::ptrdiff_t>(start),
                              s.scores.begin() + static_cast<std::ptrdiff_t>(stop));
    std::sort(block.begin(), block.end());
    const std::size_t trim = block.size() / 10;  // floor(0.1 * n) each side
    double sq = 0.0;
    const std::size_t kept = block.size() - 2 * trim;
    for (std::size_t i = trim; i < block.size() - trim; ++i)
      sq += block[i] * block[i];
    out.scores.push_back(std::sqrt(sq / static_cast<double>(kept)));
  }
  return out;
}

std::pair<double, double> error_metrics(const ShotScoreSeries& pred,
                                        const ShotScoreSeries& gt) {
  if (pred.scores.size() != gt.scores.size())
    throw ValidationError("shot series lengths differ: " +
                          std::to_string(pred.scores.size()) + " vs " +
                          std::to_string(gt.scores.size()));
  if (pred.scores.empty())
    throw ValidationError("cannot compute metrics on empty series");

  const std::size_t n = pred.scores.size();
  std::vector<double> abs_err(n);
  for (std::size_t i = 0; i < n; ++i)
    abs_err[i] = std::abs(pred.scores[i] - gt.scores[i]);
  const double mae =
      std::accumulate(abs_err.begin(), abs_err.end(), 0.0) /
      static_cast<double>(n);
  double var = 0.0;
  for (const double e : abs_err) var += (e - mae) * (e - mae);
  return {mae, var / static_cast<double>(n)};
}

SummaryMask select_summary(const ShotScoreSeries& s, double target_fraction) {
  if (!(target_fraction > 0.0 && target_fraction < 1.0))
    throw ConfigError("summary fraction must be in (0, 1), got " +
                      format_real(target_fraction));
  const std::size_t n = s.scores.size();
  const auto k = static_cast<std::size_t>(
      std::lround(target_fraction * static_cast<double>(n)));

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (s.scores[a] != s.scores[b]) return s.scores[a] > s.scores[b];
    return a < b;  // threshold ties go to the earlier shot
  });

  SummaryMask mask;
  mask.selected.assign(n, false);
  for (std::size_t i = 0; i < k; ++i) mask.selected[order[i]] = true;
  mask.fraction = n == 0 ? 0.0
                         : static_cast<double>(k) / static_cast<double>(n);
  return mask;
}

FScore f_measure(const SummaryMask& pred, const SummaryMask& gt,
                 FVariant variant) {
  if (pred.selected.size() != gt.selected.size())
    throw ValidationError("summary masks have different lengths: " +
                          std::to_string(pred.selected.size()) + " vs " +
                          std::to_string(gt.selected.size()));
  std::size_t matched = 0, n_pred = 0, n_gt = 0;
  for (std::size_t i = 0; i < pred.selected.size(); ++i) {
    n_pred += pred.selected[i];
    n_gt += gt.selected[i];
    matched += pred.selected[i] && gt.selected[i];
  }
  const auto total = static_cast<double>(pred.selected.size());

  FScore r;
  if (variant == FVariant::standard) {
    r.precision = n_pred ? static_cast<double>(matched) / n_pred : 0.0;
    r.recall = n_gt ? static_cast<double>(matched) / n_gt : 0.0;
  } else {
    r.precision = n_gt ? static_cast<double>(matched) / n_gt : 0.0;
    r.recall = total > 0 ? static_cast<double>(matched) / total : 0.0;
  }
  const double pr = r.precision + r.recall;
  r.f = pr > 0.0 ? 2.0 * r.precision * r.recall / pr : 0.0;
  return r;
}

double relative_f(double f_method, double f_reference) {
  if (!(f_reference > 0.0))
    throw ConfigError("f_reference must be positive, got " +
                      format_real(f_reference));
  return f_method / f_reference;
}

void write_score_csv(const std::filesystem::path& path, const ScoreCurve& c) {
  if (c.predicted.size() != c.smoothed.size() ||
      c.predicted.size() != c.ground_truth.size())
    throw ValidationError("score curve columns have different lengths");
  std::string text = "frame_index,predicted,smoothed,ground_truth\n";
  for (std::size_t i = 0; i < c.predicted.size(); ++i)
    text += std::to_string(i) + "," + format_real(c.predicted[i]) + "," +
            format_real(c.smoothed[i]) + "," + format_real(c.ground_truth[i]) +
            "\n";
  write_text_file(path, text);
}

ScoreCurve read_score_csv(const std::filesystem::path& path) {
  const auto lines = read_lines(path);
  if (lines.empty() ||
      lines[0] != "frame_index,predicted,smoothed,ground_truth")
    throw FormatError(
        "score CSV must start with header "
        "'frame_index,predicted,smoothed,ground_truth': " +
        path.string());
  ScoreCurve c;
  c.video_id = path.stem().string();
  for (std::size_t ln = 1; ln < lines.size(); ++ln) {
    if (lines[ln].empty()) continue;
    const auto fields = split_csv(lines[ln]);
    if (fields.size() != 4)
      throw FormatError("score CSV line " + std::to_string(ln + 1) +
                        " needs 4 fields, got " +
                        std::to_string(fields.size()));
    const long long idx = parse_int(fields[0], "frame_index");
    if (idx != static_cast<long long>(c.predicted.size()))
      throw ValidationError("score CSV frame_index must be consecutive from "
                            "0; line " +
                            std::to_string(ln + 1) + " has " + fields[0]);
    c.predicted.push_back(parse_real(fields[1], "predicted"));
    c.smoothed.push_back(parse_real(fields[2], "smoothed"));
    c.ground_truth.push_back(parse_real(fields[3], "ground_truth"));
  }
  return c;
}

std::string metrics_to_json(const MetricsReport& r) {
  nlohmann::json j;
  j["video_id"] = r.video_id;
  j["mae"] = r.mae;
  j["aev"] = r.aev;
  j["precision"] = r.precision;
  j["recall"] = r.recall;
  j["f_measure"] = r.f_measure;
  j["relative_f"] = r.relative_f;
  j["variant"] = to_string(r.variant);
  return j.dump(2) + "\n";
}

}  // namespace shotscore
