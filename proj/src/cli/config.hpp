#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "milsent/eventstudy.hpp"
#include "milsent/mil.hpp"
#include "milsent/preprocess.hpp"

namespace milsent::cli {

inline constexpr const char* kConfigEnvVar = "MILSENT_CONFIG";

/// Everything a run can be configured with, after defaults, the config file
/// and command-line overrides have been applied (in that order).
struct Settings {
  PreprocessConfig preprocess;
  EventLabelConfig event;
  TrainConfig train;
  GridSpec grid{{0.1, 1.0, 10.0, 100.0}, {0.01, 0.05, 0.1}, {0.5, 0.8, 0.9}};
  double split_ratio = 0.8;
  double l2_strength = 1.0;
  // Flat record of every resolved key, written into run manifests.
  std::map<std::string, std::string> resolved() const;
};

/// `key = value` lines, `#` comments. Pattern keys may repeat; list keys take
/// comma-separated values. Unknown keys and bad values raise ConfigError.
void apply_config(std::istream& in, Settings& settings, const std::string& source);
void apply_config_file(const std::filesystem::path& path, Settings& settings);

/// Explicit path, else $MILSENT_CONFIG, else nothing.
std::optional<std::filesystem::path> config_path(const std::optional<std::filesystem::path>& explicit_path);

std::vector<double> parse_double_list(const std::string& text, const std::string& key);

}  // namespace milsent::cli
