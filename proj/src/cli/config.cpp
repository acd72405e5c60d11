#include "cli/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <sstream>

#include "milsent/error.hpp"

namespace milsent::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& v, const std::string& key) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw ConfigError("config key '" + key + "': '" + v + "' is not a number");
  }
  return out;
}

std::uint64_t to_unsigned(const std::string& v, const std::string& key) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw ConfigError("config key '" + key + "': '" + v + "' is not a non-negative integer");
  }
  return out;
}

bool to_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("config key '" + key + "': '" + v + "' is not a boolean");
}

std::string join(const std::vector<double>& values) {
  std::string out;
  for (double v : values) {
    if (!out.empty()) out += ',';
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, ptr);
  }
  return out;
}

std::string num(double v) { return join({v}); }

}  // namespace

std::vector<double> parse_double_list(const std::string& text, const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(to_double(item, key));
  }
  if (out.empty()) throw ConfigError("config key '" + key + "' needs at least one value");
  return out;
}

std::map<std::string, std::string> Settings::resolved() const {
  std::map<std::string, std::string> m;
  m["min_doc_words"] = std::to_string(preprocess.min_doc_words);
  m["min_count"] = std::to_string(preprocess.min_count);
  m["length_percentile"] = num(preprocess.length_percentile);
  m["cutoff_patterns"] = std::to_string(preprocess.cutoff_patterns.size());
  m["window"] = std::to_string(event.window);
  m["penny_threshold"] = num(event.penny_threshold);
  m["outlier_level"] = num(event.outlier_level);
  m["lambda"] = num(train.lambda);
  m["learning_rate"] = num(train.learning_rate);
  m["momentum"] = num(train.momentum);
  m["epochs"] = std::to_string(train.epochs);
  m["groups_per_batch"] = std::to_string(train.groups_per_batch);
  m["gamma"] = train.median_gamma ? "median" : num(train.kernel_gamma);
  m["bias"] = train.use_bias ? "true" : "false";
  m["seed"] = std::to_string(train.seed);
  m["threads"] = std::to_string(train.threads);
  m["grid_lambda"] = join(grid.lambdas);
  m["grid_learning_rate"] = join(grid.learning_rates);
  m["grid_momentum"] = join(grid.momenta);
  m["split_ratio"] = num(split_ratio);
  m["l2_strength"] = num(l2_strength);
  return m;
}

void apply_config(std::istream& in, Settings& s, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  bool dates_overridden = false, urls_overridden = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(source + ":" + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    try {
      if (key == "min_doc_words") s.preprocess.min_doc_words = to_unsigned(value, key);
      else if (key == "min_count") s.preprocess.min_count = to_unsigned(value, key);
      else if (key == "length_percentile") s.preprocess.length_percentile = to_double(value, key);
      else if (key == "cutoff_pattern") s.preprocess.cutoff_patterns.push_back(value);
      else if (key == "date_pattern") {
        if (!dates_overridden) s.preprocess.date_patterns.clear();
        dates_overridden = true;
        s.preprocess.date_patterns.push_back(value);
      } else if (key == "url_pattern") {
        if (!urls_overridden) s.preprocess.url_patterns.clear();
        urls_overridden = true;
        s.preprocess.url_patterns.push_back(value);
      } else if (key == "number_pattern") s.preprocess.number_pattern = value;
      else if (key == "window") s.event.window = to_unsigned(value, key);
      else if (key == "penny_threshold") s.event.penny_threshold = to_double(value, key);
      else if (key == "outlier_level") s.event.outlier_level = to_double(value, key);
      else if (key == "lambda") s.train.lambda = to_double(value, key);
      else if (key == "learning_rate") s.train.learning_rate = to_double(value, key);
      else if (key == "momentum") s.train.momentum = to_double(value, key);
      else if (key == "epochs") s.train.epochs = to_unsigned(value, key);
      else if (key == "groups_per_batch") s.train.groups_per_batch = to_unsigned(value, key);
      else if (key == "gamma") {
        if (value == "median") {
          s.train.median_gamma = true;
        } else {
          s.train.median_gamma = false;
          s.train.kernel_gamma = to_double(value, key);
        }
      } else if (key == "bias") s.train.use_bias = to_bool(value, key);
      else if (key == "seed") s.train.seed = to_unsigned(value, key);
      else if (key == "grid_lambda") s.grid.lambdas = parse_double_list(value, key);
      else if (key == "grid_learning_rate") s.grid.learning_rates = parse_double_list(value, key);
      else if (key == "grid_momentum") s.grid.momenta = parse_double_list(value, key);
      else if (key == "split_ratio") s.split_ratio = to_double(value, key);
      else if (key == "l2_strength") s.l2_strength = to_double(value, key);
      else throw ConfigError("unknown config key '" + key + "'");
    } catch (const ConfigError& e) {
      throw ConfigError(source + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

void apply_config_file(const std::filesystem::path& path, Settings& settings) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  apply_config(in, settings, path.string());
}

std::optional<std::filesystem::path> config_path(const std::optional<std::filesystem::path>& explicit_path) {
  if (explicit_path) return explicit_path;
  if (const char* env = std::getenv(kConfigEnvVar); env && *env) return std::filesystem::path(env);
  return std::nullopt;
}

}  // namespace milsent::cli
