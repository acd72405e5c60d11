#include "cli/app.hpp"

#include <functional>
#include <optional>
#include <ostream>

#include <CLI11.hpp>

#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "milsent/error.hpp"
#include "milsent/mil.hpp"

namespace milsent::cli {

namespace {

struct GlobalOptions {
  std::optional<fs::path> config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
  std::optional<double> lambda;
  std::optional<double> learning_rate;
  std::optional<double> momentum;
  std::optional<std::size_t> epochs;
  std::optional<std::string> gamma;
  std::optional<std::size_t> dim;
  std::optional<std::string> format;
  bool grid = false;
};

Settings resolve_settings(const GlobalOptions& g) {
  Settings s;
  if (const auto path = config_path(g.config)) apply_config_file(*path, s);
  if (g.seed) s.train.seed = *g.seed;
  if (g.threads) s.train.threads = *g.threads;
  if (g.lambda) s.train.lambda = *g.lambda;
  if (g.learning_rate) s.train.learning_rate = *g.learning_rate;
  if (g.momentum) s.train.momentum = *g.momentum;
  if (g.epochs) s.train.epochs = *g.epochs;
  if (g.gamma) {
    if (*g.gamma == "median") {
      s.train.median_gamma = true;
    } else {
      s.train.median_gamma = false;
      s.train.kernel_gamma = parse_double_list(*g.gamma, "--gamma").front();
    }
  }
  return s;
}

void add_embedding_options(CLI::App* cmd, EmbeddingSource& src) {
  cmd->add_option("--word-vectors", src.word_vectors, "word vectors (text, one word per line); sentences are averaged");
  cmd->add_option("--sentence-vectors", src.sentence_vectors, "precomputed sentence vectors keyed doc_id:index");
  cmd->add_flag("--hash-embed", src.hash, "deterministic hashed token vectors (no external file)");
}

std::pair<std::string, fs::path> split_named_path(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == text.size()) {
    throw ConfigError("--pred expects NAME=PATH, got '" + text + "'");
  }
  return {text.substr(0, eq), fs::path(text.substr(eq + 1))};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sentence-level polarity from document-level labels via multi-instance learning", "milsent"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  GlobalOptions g;
  app.add_option("--config", g.config, "key = value config file (default: $MILSENT_CONFIG)");
  app.add_option("--seed", g.seed, "seed for every random choice");
  app.add_option("--threads", g.threads, "worker threads for parallel sections")->check(CLI::PositiveNumber);
  app.add_option("--lambda", g.lambda, "document-error weight");
  app.add_option("--learning-rate", g.learning_rate, "SGD step size");
  app.add_option("--momentum", g.momentum, "SGD momentum");
  app.add_option("--epochs", g.epochs, "training epochs");
  app.add_option("--gamma", g.gamma, "RBF kernel width, or 'median'");
  app.add_option("--dim", g.dim, "expected embedding dimension")->check(CLI::PositiveNumber);
  app.add_option("--format", g.format, "output format: text|json (evaluate), ansi|html (render)");
  app.add_flag("--grid", g.grid, "train: search the configured hyperparameter grid");

  std::function<int(RunContext&)> action;
  std::string command;
  auto sub = [&](CLI::App* parent, const std::string& name, const std::string& help) {
    auto* cmd = parent->add_subcommand(name, help);
    cmd->fallthrough();
    return cmd;
  };

  PreprocessArgs pre;
  auto* c_pre = sub(&app, "preprocess", "clean, split, tokenize, build vocabulary and filter a corpus");
  c_pre->add_option("input", pre.input, "raw corpus (JSONL)")->required();
  c_pre->add_option("output", pre.output, "processed corpus")->required();
  c_pre->callback([&] { command = "preprocess"; action = [&](RunContext& c) { return cmd_preprocess(c, pre); }; });

  LabelArgs lab;
  auto* c_lab = sub(&app, "label", "label documents by the sign of their event-day abnormal return");
  c_lab->add_option("input", lab.input, "corpus")->required();
  c_lab->add_option("--prices", lab.prices_dir, "directory of <TICKER>.csv files (date,close)")->required();
  c_lab->add_option("--index", lab.index_file, "market index CSV (date,close)")->required();
  c_lab->add_option("output", lab.output, "labeled corpus")->required();
  c_lab->callback([&] { command = "label"; action = [&](RunContext& c) { return cmd_label(c, lab); }; });

  TrainArgs tr;
  auto* c_tr = sub(&app, "train", "train the sentence model from document labels");
  c_tr->add_option("input", tr.input, "labeled corpus")->required();
  c_tr->add_option("--model", tr.model, "model output path")->required();
  add_embedding_options(c_tr, tr.embedding);
  c_tr->callback([&] { command = "train"; action = [&](RunContext& c) { return cmd_train(c, tr); }; });

  PredictArgs pr;
  auto* c_pr = sub(&app, "predict", "label sentences and documents with a trained model");
  c_pr->add_option("--model", pr.model, "model file")->required();
  c_pr->add_option("input", pr.input, "corpus")->required();
  c_pr->add_option("output", pr.output, "corpus with predictions")->required();
  c_pr->add_flag("--mean-rule", pr.mean_rule, "document label from the mean score instead of the majority");
  add_embedding_options(c_pr, pr.embedding);
  c_pr->callback([&] { command = "predict"; action = [&](RunContext& c) { return cmd_predict(c, pr); }; });

  EvaluateArgs ev;
  std::vector<std::string> ev_preds;
  auto* c_ev = sub(&app, "evaluate", "score one or more prediction files against gold labels");
  c_ev->add_option("--gold", ev.gold, "corpus with gold labels")->required();
  c_ev->add_option("--pred", ev_preds, "NAME=PATH of a prediction corpus (repeatable)")->required();
  c_ev->add_option("--mode", ev.mode, "sentence|document")->capture_default_str();
  c_ev->add_option("--output", ev.output, "write the report here instead of stdout");
  c_ev->callback([&] {
    command = "evaluate";
    action = [&](RunContext& c) {
      for (const auto& p : ev_preds) ev.predictions.push_back(split_named_path(p));
      if (g.format) ev.format = *g.format;
      return cmd_evaluate(c, ev);
    };
  });

  RenderArgs rd;
  auto* c_rd = sub(&app, "render", "show a document with per-sentence polarity highlighting");
  c_rd->add_option("input", rd.input, "corpus with predictions")->required();
  c_rd->add_option("--doc", rd.doc_id, "document id")->required();
  c_rd->add_option("--output", rd.output, "write here instead of stdout");
  c_rd->callback([&] {
    command = "render";
    action = [&](RunContext& c) {
      if (g.format) rd.format = *g.format;
      return cmd_render(c, rd);
    };
  });

  auto* c_base = sub(&app, "baseline", "reference classifiers");
  c_base->require_subcommand(1);

  DictBaselineArgs bd;
  auto* c_bd = sub(c_base, "dict", "word-list classifier (positive vs negative hit counts)");
  c_bd->add_option("--positive", bd.positive, "positive word list, one term per line")->required();
  c_bd->add_option("--negative", bd.negative, "negative word list, one term per line")->required();
  c_bd->add_option("--name", bd.name, "dictionary name")->default_str("dictionary");
  c_bd->add_option("input", bd.input, "corpus")->required();
  c_bd->add_option("output", bd.output, "corpus with predictions")->required();
  c_bd->callback([&] {
    command = "baseline dict";
    if (bd.name.empty()) bd.name = "dictionary";
    action = [&](RunContext& c) { return cmd_baseline_dict(c, bd); };
  });

  BowBaselineArgs bb;
  auto* c_bb = sub(c_base, "bow", "bag-of-words logistic regression trained on document labels");
  c_bb->add_option("--train", bb.train, "labeled training corpus")->required();
  c_bb->add_option("--min-count", bb.min_count, "minimum document-corpus term count")->capture_default_str();
  c_bb->add_option("input", bb.input, "corpus to label")->required();
  c_bb->add_option("output", bb.output, "corpus with predictions")->required();
  c_bb->callback([&] { command = "baseline bow"; action = [&](RunContext& c) { return cmd_baseline_bow(c, bb); }; });

  EmbedBaselineArgs be;
  auto* c_be = sub(c_base, "embed-logreg", "logistic regression on mean sentence embeddings");
  c_be->add_option("--train", be.train, "labeled training corpus")->required();
  c_be->add_option("input", be.input, "corpus to label")->required();
  c_be->add_option("output", be.output, "corpus with predictions")->required();
  add_embedding_options(c_be, be.embedding);
  c_be->callback([&] {
    command = "baseline embed-logreg";
    action = [&](RunContext& c) { return cmd_baseline_embed(c, be); };
  });

  SplitArgs sp;
  auto* c_sp = sub(&app, "split", "chronological train/test split");
  c_sp->add_option("input", sp.input, "corpus")->required();
  c_sp->add_option("train_output", sp.train_output, "older documents")->required();
  c_sp->add_option("test_output", sp.test_output, "newer documents")->required();
  c_sp->callback([&] { command = "split"; action = [&](RunContext& c) { return cmd_split(c, sp); }; });

  DistributionArgs di;
  auto* c_di = sub(&app, "distribution", "cross-tabulate document labels against predicted sentence labels");
  c_di->add_option("input", di.input, "corpus with document labels and sentence predictions")->required();
  c_di->callback([&] { command = "distribution"; action = [&](RunContext& c) { return cmd_distribution(c, di); }; });

  SynthArgs sy;
  auto* c_sy = sub(&app, "synth", "write a synthetic corpus with known sentence labels");
  c_sy->add_option("output", sy.output, "corpus path")->required();
  c_sy->add_option("--groups", sy.groups, "documents")->capture_default_str()->check(CLI::PositiveNumber);
  c_sy->add_option("--per-group", sy.per_group, "sentences per document")->capture_default_str()->check(CLI::PositiveNumber);
  c_sy->add_option("--separation", sy.separation, "distance of the class means")->capture_default_str();
  c_sy->add_option("--noise", sy.noise, "fraction of flipped sentence labels")->capture_default_str();
  c_sy->callback([&] {
    command = "synth";
    action = [&](RunContext& c) {
      if (g.dim) sy.dim = *g.dim;
      return cmd_synth(c, sy);
    };
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  auto set_dim = [&](EmbeddingSource& src) { src.dim = g.dim; };
  set_dim(tr.embedding);
  set_dim(pr.embedding);
  set_dim(be.embedding);
  tr.grid = g.grid;

  try {
    RunContext ctx{command, args, resolve_settings(g), out, err};
    if (g.grid && command != "train") throw ConfigError("--grid applies to 'train' only");
    return action(ctx);
  } catch (const ConfigError& e) {
    err << "milsent: error: " << e.what() << "\nrun 'milsent " << command << " --help' for usage\n";
    return 2;
  } catch (const ModelFormatError& e) {
    err << "milsent: error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "milsent: error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace milsent::cli
