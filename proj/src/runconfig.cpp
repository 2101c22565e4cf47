#include "shotscore/runconfig.hpp"

#include <cctype>
#include <climits>

#include "shotscore/error.hpp"
#include "shotscore/scoring.hpp"
#include "shotscore/textio.hpp"

namespace shotscore {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

int to_int(const std::string& v, const std::string& key) {
  const long long x = parse_int(v, key);
  if (x < INT_MIN || x > INT_MAX)
    throw ConfigError(key + " out of range: " + v);
  return static_cast<int>(x);
}

bool to_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError(key + " must be true or false, got '" + v + "'");
}

std::uint64_t to_u64(const std::string& v, const std::string& key) {
  try {
    std::size_t used = 0;
    const unsigned long long x = std::stoull(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("bad value for " + key + ": '" + v + "'");
  }
}

}  // namespace

void set_config_key(RunConfig& cfg, const std::string& key,
                    const std::string& value) {
  try {
    if (key == "seed") cfg.seed = to_u64(value, key);
    else if (key == "epochs") cfg.epochs = to_int(value, key);
    else if (key == "batch_size") cfg.batch_size = to_int(value, key);
    else if (key == "input_side") cfg.input_side = to_int(value, key);
    else if (key == "resize_side") cfg.resize_side = to_int(value, key);
    else if (key == "kernel") cfg.kernel = to_int(value, key);
    else if (key == "hidden_units") cfg.hidden_units = to_int(value, key);
    else if (key == "keep_prob") cfg.keep_prob = parse_real(value, key);
    else if (key == "alpha") cfg.alpha = parse_real(value, key);
    else if (key == "beta1") cfg.beta1 = parse_real(value, key);
    else if (key == "beta2") cfg.beta2 = parse_real(value, key);
    else if (key == "epsilon") cfg.epsilon = parse_real(value, key);
    else if (key == "shot_length") cfg.shot_length = to_int(value, key);
    else if (key == "smooth_window") cfg.smooth_window = to_int(value, key);
    else if (key == "summary_fraction")
      cfg.summary_fraction = parse_real(value, key);
    else if (key == "f_variant") cfg.f_variant = value;
    else if (key == "f_reference") cfg.f_reference = parse_real(value, key);
    else if (key == "train_count") cfg.train_count = to_int(value, key);
    else if (key == "test_count") cfg.test_count = to_int(value, key);
    else if (key == "min_train_per_genre")
      cfg.min_train_per_genre = to_int(value, key);
    else if (key == "min_test_per_genre")
      cfg.min_test_per_genre = to_int(value, key);
    else if (key == "augment") cfg.augment = to_bool(value, key);
    else if (key == "stop_loss") cfg.stop_loss = parse_real(value, key);
    else if (key == "checkpoint_every")
      cfg.checkpoint_every = parse_int(value, key);
    else
      throw ConfigError("unknown config key '" + key + "'");
  } catch (const FormatError& e) {
    // Numeric parse failures inside a config file are config errors.
    throw ConfigError(e.what());
  }
}

void apply_config_file(RunConfig& cfg, const std::filesystem::path& path) {
  const auto lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string line = trim(lines[i]);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path.string() + ":" + std::to_string(i + 1) +
                        ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError(path.string() + ":" + std::to_string(i + 1) +
                        ": expected 'key = value'");
    set_config_key(cfg, key, value);
  }
}

void validate_config(const RunConfig& cfg) {
  if (cfg.epochs < 0) throw ConfigError("epochs must be >= 0");
  if (cfg.batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (cfg.input_side < 4 || cfg.input_side % 4 != 0)
    throw ConfigError("input_side must be a positive multiple of 4, got " +
                      std::to_string(cfg.input_side));
  if (cfg.resize_side < cfg.input_side)
    throw ConfigError("resize_side must be >= input_side");
  if (cfg.kernel < 1 || cfg.kernel % 2 == 0)
    throw ConfigError("kernel must be odd and >= 1");
  if (cfg.hidden_units < 1) throw ConfigError("hidden_units must be >= 1");
  if (!(cfg.keep_prob > 0.0 && cfg.keep_prob <= 1.0))
    throw ConfigError("keep_prob must be in (0, 1]");
  if (!(cfg.alpha > 0.0)) throw ConfigError("alpha must be positive");
  if (!(cfg.beta1 >= 0.0 && cfg.beta1 < 1.0))
    throw ConfigError("beta1 must be in [0, 1)");
  if (!(cfg.beta2 >= 0.0 && cfg.beta2 < 1.0))
    throw ConfigError("beta2 must be in [0, 1)");
  if (!(cfg.epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  if (cfg.shot_length < 1) throw ConfigError("shot_length must be >= 1");
  if (cfg.smooth_window < 1 || cfg.smooth_window % 2 == 0)
    throw ConfigError("smooth_window must be odd and >= 1");
  if (!(cfg.summary_fraction > 0.0 && cfg.summary_fraction < 1.0))
    throw ConfigError("summary_fraction must be in (0, 1)");
  f_variant_from_string(cfg.f_variant);  // throws on anything else
  if (!(cfg.f_reference > 0.0))
    throw ConfigError("f_reference must be positive");
  if (cfg.train_count < 0 || cfg.test_count < 0)
    throw ConfigError("train_count and test_count must be >= 0");
  if (cfg.min_train_per_genre < 0 || cfg.min_test_per_genre < 0)
    throw ConfigError("per-genre minimums must be >= 0");
  if (cfg.stop_loss < 0.0) throw ConfigError("stop_loss must be >= 0");
  if (cfg.checkpoint_every < 0)
    throw ConfigError("checkpoint_every must be >= 0");
}

std::string serialize_config(const RunConfig& cfg) {
  std::string out;
  const auto put = [&out](const std::string& key, const std::string& value) {
    out += key + " = " + value + "\n";
  };
  // Alphabetical so the archive is byte-stable.
  put("alpha", format_real(cfg.alpha));
  put("augment", cfg.augment ? "true" : "false");
  put("batch_size", std::to_string(cfg.batch_size));
  put("beta1", format_real(cfg.beta1));
  put("beta2", format_real(cfg.beta2));
  put("checkpoint_every", std::to_string(cfg.checkpoint_every));
  put("epochs", std::to_string(cfg.epochs));
  put("epsilon", format_real(cfg.epsilon));
  put("f_reference", format_real(cfg.f_reference));
  put("f_variant", cfg.f_variant);
  put("hidden_units", std::to_string(cfg.hidden_units));
  put("input_side", std::to_string(cfg.input_side));
  put("keep_prob", format_real(cfg.keep_prob));
  put("kernel", std::to_string(cfg.kernel));
  put("min_test_per_genre", std::to_string(cfg.min_test_per_genre));
  put("min_train_per_genre", std::to_string(cfg.min_train_per_genre));
  put("resize_side", std::to_string(cfg.resize_side));
  put("seed", std::to_string(cfg.seed));
  put("shot_length", std::to_string(cfg.shot_length));
  put("smooth_window", std::to_string(cfg.smooth_window));
  put("stop_loss", format_real(cfg.stop_loss));
  put("summary_fraction", format_real(cfg.summary_fraction));
  put("test_count", std::to_string(cfg.test_count));
  put("train_count", std::to_string(cfg.train_count));
  return out;
}

}  // namespace shotscore
