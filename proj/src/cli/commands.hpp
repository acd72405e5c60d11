#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cli/config.hpp"

namespace milsent::cli {

namespace fs = std::filesystem;

inline constexpr const char* kToolVersion = "1.0.0";

/// State shared by every subcommand of one invocation.
struct RunContext {
  std::string command;
  std::vector<std::string> args;
  Settings settings;
  std::ostream& out;
  std::ostream& err;
};

/// Where sentence vectors come from. At most one of the three sources may be
/// set; with none, vectors already stored in the corpus are used.
struct EmbeddingSource {
  std::optional<fs::path> word_vectors;
  std::optional<fs::path> sentence_vectors;
  bool hash = false;
  std::optional<std::size_t> dim;  // expected dimension (--dim)
};

struct PreprocessArgs {
  fs::path input, output;
};
struct LabelArgs {
  fs::path input, prices_dir, index_file, output;
};
struct TrainArgs {
  fs::path input, model;
  EmbeddingSource embedding;
  bool grid = false;
};
struct PredictArgs {
  fs::path model, input, output;
  EmbeddingSource embedding;
  bool mean_rule = false;
};
struct EvaluateArgs {
  fs::path gold;
  std::vector<std::pair<std::string, fs::path>> predictions;
  std::string mode = "sentence";
  std::string format = "text";
  std::optional<fs::path> output;
};
struct RenderArgs {
  fs::path input;
  std::string doc_id;
  std::string format = "ansi";
  std::optional<fs::path> output;
};
struct DictBaselineArgs {
  fs::path positive, negative, input, output;
  std::string name;
};
struct BowBaselineArgs {
  fs::path train, input, output;
  std::size_t min_count = 1;
};
struct EmbedBaselineArgs {
  fs::path train, input, output;
  EmbeddingSource embedding;
};
struct SplitArgs {
  fs::path input, train_output, test_output;
};
struct DistributionArgs {
  fs::path input;
};
struct SynthArgs {
  fs::path output;
  std::size_t groups = 200;
  std::size_t per_group = 5;
  std::size_t dim = 16;
  double separation = 3.0;
  double noise = 0.1;
};

int cmd_preprocess(RunContext& ctx, const PreprocessArgs& a);
int cmd_label(RunContext& ctx, const LabelArgs& a);
int cmd_train(RunContext& ctx, const TrainArgs& a);
int cmd_predict(RunContext& ctx, const PredictArgs& a);
int cmd_evaluate(RunContext& ctx, const EvaluateArgs& a);
int cmd_render(RunContext& ctx, const RenderArgs& a);
int cmd_baseline_dict(RunContext& ctx, const DictBaselineArgs& a);
int cmd_baseline_bow(RunContext& ctx, const BowBaselineArgs& a);
int cmd_baseline_embed(RunContext& ctx, const EmbedBaselineArgs& a);
int cmd_split(RunContext& ctx, const SplitArgs& a);
int cmd_distribution(RunContext& ctx, const DistributionArgs& a);
int cmd_synth(RunContext& ctx, const SynthArgs& a);

}  // namespace milsent::cli
