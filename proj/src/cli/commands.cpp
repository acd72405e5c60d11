#include "cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "cli/render.hpp"
#include "milsent/baselines.hpp"
#include "milsent/corpus.hpp"
#include "milsent/embed.hpp"
#include "milsent/error.hpp"
#include "milsent/eval.hpp"
#include "milsent/eventstudy.hpp"
#include "milsent/mil.hpp"
#include "milsent/preprocess.hpp"

namespace milsent::cli {

namespace {

using nlohmann::json;

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * v);
  return buf;
}

void require_file(const fs::path& p, const std::string& what) {
  if (!fs::is_regular_file(p)) throw ConfigError(what + " '" + p.string() + "' does not exist");
}

void require_dir(const fs::path& p, const std::string& what) {
  if (!fs::is_directory(p)) throw ConfigError(what + " '" + p.string() + "' is not a directory");
}

// Run manifest next to the primary output: enough to reproduce the run.
class Manifest {
 public:
  explicit Manifest(const RunContext& ctx) : ctx_(ctx), started_(utc_now()) {}

  void input(const std::string& name, const fs::path& p) { inputs_[name] = p.string(); }
  void output(const std::string& name, const fs::path& p) { outputs_[name] = p.string(); }

  void write(const fs::path& primary_output) const {
    json j;
    j["tool"] = "milsent";
    j["version"] = kToolVersion;
    j["command"] = ctx_.command;
    j["arguments"] = ctx_.args;
    j["config"] = ctx_.settings.resolved();
    j["seed"] = ctx_.settings.train.seed;
    j["inputs"] = inputs_;
    j["outputs"] = outputs_;
    j["started_at"] = started_;
    j["finished_at"] = utc_now();
    const fs::path path = primary_output.string() + ".manifest.json";
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError("cannot write manifest '" + path.string() + "'");
    out << j.dump(2) << '\n';
  }

 private:
  const RunContext& ctx_;
  std::string started_;
  std::map<std::string, std::string> inputs_;
  std::map<std::string, std::string> outputs_;
};

std::vector<std::string> sentence_tokens(const SentenceInstance& s) {
  return s.tokens.empty() ? tokenize(s.text) : s.tokens;
}

std::vector<std::string> document_tokens(const Document& doc) {
  if (doc.sentences.empty()) return tokenize(doc.raw_text);
  std::vector<std::string> all;
  for (const auto& s : doc.sentences) {
    auto t = sentence_tokens(s);
    all.insert(all.end(), t.begin(), t.end());
  }
  return all;
}

bool has_all_embeddings(const Corpus& corpus) {
  for (const auto& d : corpus) {
    for (const auto& s : d.sentences) {
      if (!s.embedding) return false;
    }
  }
  return true;
}

// Embeds the corpus per `src`; returns the embedding dimension, or 0 when the
// corpus has no sentences. Returns whether vectors were computed (not read).
std::pair<std::size_t, bool> ensure_embeddings(RunContext& ctx, Corpus& corpus,
                                               const EmbeddingSource& src, Manifest& manifest) {
  const int sources = (src.word_vectors ? 1 : 0) + (src.sentence_vectors ? 1 : 0) + (src.hash ? 1 : 0);
  if (sources > 1) {
    throw ConfigError("choose at most one of --word-vectors, --sentence-vectors, --hash-embed");
  }
  if (sources == 0) {
    if (!has_all_embeddings(corpus)) {
      throw ConfigError(
          "corpus sentences carry no embeddings; pass --word-vectors, --sentence-vectors or --hash-embed");
    }
    std::size_t dim = 0;
    for (const auto& d : corpus) {
      for (const auto& s : d.sentences) {
        if (dim == 0) dim = s.embedding->size();
        if (s.embedding->size() != dim) {
          throw DataError("inconsistent embedding dimension in document '" + d.id + "'");
        }
      }
    }
    if (src.dim && dim != 0 && *src.dim != dim) {
      throw ConfigError("--dim " + std::to_string(*src.dim) + " conflicts with corpus embedding dimension " +
                        std::to_string(dim));
    }
    return {dim, false};
  }

  EmbeddingStore store = [&] {
    if (src.word_vectors) {
      require_file(*src.word_vectors, "word-vector file");
      manifest.input("word_vectors", *src.word_vectors);
      return load_embeddings(*src.word_vectors);
    }
    if (src.sentence_vectors) {
      require_file(*src.sentence_vectors, "sentence-vector file");
      manifest.input("sentence_vectors", *src.sentence_vectors);
      return load_sentence_embeddings(*src.sentence_vectors);
    }
    return EmbeddingStore::hash_fallback(src.dim.value_or(300), ctx.settings.train.seed);
  }();
  if (src.dim && *src.dim != store.dim()) {
    throw ConfigError("--dim " + std::to_string(*src.dim) + " conflicts with embedding dimension " +
                      std::to_string(store.dim()));
  }
  const auto summary = embed_corpus(corpus, store);
  ctx.err << "embedded " << summary.sentences << " sentences (" << to_string(store.provider())
          << ", dim " << store.dim() << ")";
  if (store.provider() == EmbeddingProvider::word_average) {
    ctx.err << "; " << summary.oov_tokens << " of " << summary.total_tokens
            << " tokens out of vocabulary";
  }
  if (summary.zero_vector_sentences > 0) {
    ctx.err << "; " << summary.zero_vector_sentences << " sentences mapped to the zero vector";
  }
  ctx.err << '\n';
  return {store.dim(), true};
}

void strip_embeddings(Corpus& corpus) {
  for (auto& d : corpus) {
    for (auto& s : d.sentences) s.embedding.reset();
  }
}

Corpus labeled_with_sentences(const Corpus& corpus, std::ostream& err) {
  Corpus kept;
  std::size_t skipped = 0;
  for (const auto& d : corpus) {
    if (d.label && !d.sentences.empty()) {
      kept.push_back(d);
    } else {
      ++skipped;
    }
  }
  if (skipped > 0) err << "warning: skipped " << skipped << " documents without a label or sentences\n";
  return kept;
}

std::ofstream open_output(const fs::path& p) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + p.string() + "'");
  return out;
}

}  // namespace

int cmd_preprocess(RunContext& ctx, const PreprocessArgs& a) {
  require_file(a.input, "input corpus");
  Manifest manifest(ctx);
  manifest.input("corpus", a.input);
  const auto& cfg = ctx.settings.preprocess;
  cfg.validate();

  Corpus corpus = load_corpus(a.input);
  const TextCleaner cleaner(cfg);
  std::vector<std::vector<std::string>> token_sequences;
  for (auto& doc : corpus) {
    if (doc.sentences.empty()) {
      for (auto& text : split_sentences(cleaner.clean(doc.raw_text))) {
        SentenceInstance s;
        s.text = std::move(text);
        doc.sentences.push_back(std::move(s));
      }
    } else {
      for (auto& s : doc.sentences) s.text = cleaner.clean(s.text);
    }
    for (auto& s : doc.sentences) {
      s.tokens = tokenize(s.text);
      token_sequences.push_back(s.tokens);
    }
  }

  std::set<std::string> raw_terms;
  for (const auto& seq : token_sequences) raw_terms.insert(seq.begin(), seq.end());
  const Vocabulary vocab = build_vocabulary(token_sequences, cfg.min_count);
  for (auto& doc : corpus) {
    for (auto& s : doc.sentences) s.tokens = apply_vocabulary(s.tokens, vocab);
  }

  std::size_t short_docs = 0;
  for (const auto& doc : corpus) {
    if (document_word_count(doc) < cfg.min_doc_words) ++short_docs;
  }
  const Corpus filtered = filter_corpus(corpus, cfg);
  save_corpus(a.output, filtered);
  manifest.output("corpus", a.output);
  manifest.write(a.output);

  std::size_t sentences = 0;
  for (const auto& d : filtered) sentences += d.sentences.size();
  ctx.out << "documents in:            " << corpus.size() << '\n'
          << "removed (< " << cfg.min_doc_words << " words):   " << short_docs << '\n'
          << "removed (length pctl):   " << corpus.size() - short_docs - filtered.size() << '\n'
          << "documents out:           " << filtered.size() << '\n'
          << "sentences out:           " << sentences << '\n'
          << "vocabulary before:       " << raw_terms.size() << '\n'
          << "vocabulary after:        " << vocab.size() << " (min_count " << cfg.min_count << ")\n";
  if (filtered.empty()) ctx.err << "warning: no documents survived filtering; output is empty\n";
  return 0;
}

int cmd_label(RunContext& ctx, const LabelArgs& a) {
  require_file(a.input, "input corpus");
  require_dir(a.prices_dir, "price directory");
  require_file(a.index_file, "index price file");
  Manifest manifest(ctx);
  manifest.input("corpus", a.input);
  manifest.input("prices_dir", a.prices_dir);
  manifest.input("index", a.index_file);
  ctx.settings.event.validate();

  const Corpus corpus = load_corpus(a.input);
  const auto prices = load_price_directory(a.prices_dir);
  const auto index = load_price_series(a.index_file, a.index_file.stem().string());
  const auto result = label_documents(corpus, prices, index, ctx.settings.event);
  save_corpus(a.output, result.labeled);
  manifest.output("corpus", a.output);
  manifest.write(a.output);

  std::size_t pos = 0;
  for (const auto& d : result.labeled) pos += *d.label == Polarity::positive ? 1 : 0;
  const std::size_t n = result.labeled.size();
  const std::size_t neg = n - pos;
  const double denom = n == 0 ? 1.0 : static_cast<double>(n);
  ctx.out << "documents in:      " << corpus.size() << '\n'
          << "labeled:           " << n << '\n'
          << "  positive AR:     " << pos << " (" << pct(static_cast<double>(pos) / denom) << ")\n"
          << "  negative AR:     " << neg << " (" << pct(static_cast<double>(neg) / denom) << ")\n"
          << "dropped:           " << result.dropped.size() << '\n'
          << "  market data:     " << result.data_dropped << '\n'
          << "  penny stock:     " << result.penny_dropped << '\n'
          << "  zero AR:         " << result.zero_return_dropped << '\n'
          << "  AR outliers:     " << result.outlier_dropped << '\n'
          << "(filter order: market data, penny stock, zero AR, then outlier trim of "
          << ctx.settings.event.outlier_level << " per tail)\n";
  for (const auto& d : result.dropped) ctx.out << "dropped " << d.id << ": " << d.reason << '\n';
  if (n == 0) ctx.err << "warning: no documents were labeled\n";
  return 0;
}

int cmd_train(RunContext& ctx, const TrainArgs& a) {
  require_file(a.input, "input corpus");
  Manifest manifest(ctx);
  manifest.input("corpus", a.input);
  auto& cfg = ctx.settings.train;
  cfg.validate();

  Corpus corpus = labeled_with_sentences(load_corpus(a.input), ctx.err);
  if (corpus.empty()) throw DataError("no labeled documents with sentences to train on");
  ensure_embeddings(ctx, corpus, a.embedding, manifest);
  const MilDataset data = to_mil_dataset(corpus);

  TrainResult result;
  if (a.grid) {
    const auto g = grid_search(data, ctx.settings.grid, cfg);
    result = g.best;
    const fs::path grid_path = a.model.string() + ".grid.tsv";
    auto out = open_output(grid_path);
    out << "lambda\tlearning_rate\tmomentum\tdoc_accuracy\tfinal_loss\terror\n";
    for (const auto& c : g.report.cells) {
      out << c.lambda << '\t' << c.learning_rate << '\t' << c.momentum << '\t'
          << (c.accuracy ? std::to_string(*c.accuracy) : "nan") << '\t'
          << (c.final_loss ? std::to_string(*c.final_loss) : "nan") << '\t' << c.error << '\n';
    }
    manifest.output("grid_report", grid_path);
    const auto& best = g.report.cells[g.report.best];
    ctx.out << "grid search: " << g.report.cells.size() << " configurations; best lambda=" << best.lambda
            << " learning_rate=" << best.learning_rate << " momentum=" << best.momentum << '\n';
  } else {
    result = train(data, cfg);
  }

  save_model(a.model, result.model);
  manifest.output("model", a.model);
  const fs::path trace_path = a.model.string() + ".trace.tsv";
  {
    auto out = open_output(trace_path);
    out << "epoch\tloss\n" << std::setprecision(17);
    for (std::size_t e = 0; e < result.loss_trace.size(); ++e) out << e << '\t' << result.loss_trace[e] << '\n';
  }
  manifest.output("loss_trace", trace_path);
  manifest.write(a.model);

  const double acc = document_accuracy(result.model, data);
  ctx.out << "groups: " << data.groups.size() << ", instances: " << data.instance_count()
          << ", dim: " << data.dim << '\n';
  ctx.out << "in-sample document accuracy: " << pct(acc) << '\n';
  if (result.loss_trace.size() >= 2) {
    const double first = result.loss_trace.front();
    const double last = result.loss_trace.back();
    const double mean_step = (last - first) / static_cast<double>(result.loss_trace.size() - 1);
    ctx.out << std::setprecision(6) << "loss: initial " << first << ", final " << last
            << ", mean change per epoch " << mean_step << '\n';
    ctx.out << "loss trace non-increasing on average: " << (mean_step <= 0.0 ? "yes" : "no") << '\n';
  }
  return 0;
}

int cmd_predict(RunContext& ctx, const PredictArgs& a) {
  require_file(a.model, "model file");
  require_file(a.input, "input corpus");
  Manifest manifest(ctx);
  manifest.input("model", a.model);
  manifest.input("corpus", a.input);
  const MilModel model = load_model(a.model);
  Corpus corpus = load_corpus(a.input);

  std::size_t sentences = 0, positive = 0, agree = 0, with_gold = 0;
  bool computed = false;
  if (!corpus.empty()) {
    EmbeddingSource src = a.embedding;
    if (!src.dim) src.dim = model.dim;
    try {
      computed = ensure_embeddings(ctx, corpus, src, manifest).second;
    } catch (const ConfigError& e) {
      throw ConfigError(std::string("model/corpus mismatch: ") + e.what());
    }
    const auto rule = a.mean_rule ? DocumentRule::mean_score : DocumentRule::majority;
    for (auto& doc : corpus) {
      if (doc.sentences.empty()) continue;
      InstanceMatrix group;
      for (auto& s : doc.sentences) {
        if (s.embedding->size() != model.dim) {
          throw ConfigError("model/corpus dimension mismatch in document '" + doc.id + "'");
        }
        const auto p = predict_sentence(model, *s.embedding);
        s.predicted_label = as_prediction(p.label);
        s.score = p.score;
        group.append_row(*s.embedding);
        ++sentences;
        positive += p.label == Polarity::positive ? 1 : 0;
        if (s.gold_label) {
          ++with_gold;
          agree += *s.gold_label == p.label ? 1 : 0;
        }
      }
      doc.predicted_label = as_prediction(predict_document(model, group, rule).label);
    }
  }
  if (computed) strip_embeddings(corpus);
  save_corpus(a.output, corpus);
  manifest.output("corpus", a.output);
  manifest.write(a.output);

  ctx.out << "documents: " << corpus.size() << ", sentences: " << sentences << '\n';
  if (sentences > 0) {
    ctx.out << "positive sentences: " << pct(static_cast<double>(positive) / static_cast<double>(sentences))
            << '\n';
  }
  if (with_gold > 0) {
    ctx.out << "sentence agreement with gold labels: "
            << pct(static_cast<double>(agree) / static_cast<double>(with_gold)) << " (" << with_gold
            << " sentences)\n";
  }
  if (corpus.empty()) ctx.err << "warning: empty corpus\n";
  return 0;
}

int cmd_evaluate(RunContext& ctx, const EvaluateArgs& a) {
  if (a.mode != "sentence" && a.mode != "document") throw ConfigError("--mode must be sentence or document");
  if (a.format != "text" && a.format != "json") throw ConfigError("--format must be text or json");
  if (a.predictions.empty()) throw ConfigError("at least one --pred NAME=PATH is required");
  require_file(a.gold, "gold corpus");
  const Corpus gold = load_corpus(a.gold);
  std::map<std::string, const Document*> gold_by_id;
  for (const auto& d : gold) gold_by_id.emplace(d.id, &d);

  std::vector<MethodReport> rows;
  for (const auto& [name, path] : a.predictions) {
    require_file(path, "prediction corpus");
    const Corpus pred = load_corpus(path);
    std::map<std::string, const Document*> pred_by_id;
    for (const auto& d : pred) pred_by_id.emplace(d.id, &d);

    std::vector<Prediction> predicted;
    std::vector<Polarity> truth;
    for (const auto& g : gold) {
      auto it = pred_by_id.find(g.id);
      if (a.mode == "document") {
        if (!g.label) continue;
        if (it == pred_by_id.end() || !it->second->predicted_label) {
          throw DataError("label-file mismatch: '" + path.string() + "' has no prediction for document '" +
                          g.id + "'");
        }
        predicted.push_back(*it->second->predicted_label);
        truth.push_back(*g.label);
        continue;
      }
      const bool needs = std::any_of(g.sentences.begin(), g.sentences.end(),
                                     [](const SentenceInstance& s) { return s.gold_label.has_value(); });
      if (!needs) continue;
      if (it == pred_by_id.end() || it->second->sentences.size() != g.sentences.size()) {
        throw DataError("label-file mismatch: sentences of document '" + g.id + "' do not line up in '" +
                        path.string() + "'");
      }
      for (std::size_t i = 0; i < g.sentences.size(); ++i) {
        if (!g.sentences[i].gold_label) continue;
        const auto& p = it->second->sentences[i].predicted_label;
        if (!p) {
          throw DataError("label-file mismatch: document '" + g.id + "' sentence " + std::to_string(i) +
                          " has no prediction in '" + path.string() + "'");
        }
        predicted.push_back(*p);
        truth.push_back(*g.sentences[i].gold_label);
      }
    }
    if (truth.empty()) throw DataError("gold corpus has no " + a.mode + "-level labels");
    MethodReport row{name, score_predictions(predicted, truth), false};
    row.emits_neutral = row.report.neutral > 0;
    rows.push_back(std::move(row));
  }

  std::ostringstream text;
  if (a.format == "json") {
    text << report_json(rows, a.mode) << '\n';
  } else {
    print_report_table(text, rows, a.mode == "sentence" ? "Sentence-Level" : "Document-Level");
  }
  if (a.output) {
    auto out = open_output(*a.output);
    out << text.str();
  } else {
    ctx.out << text.str();
  }
  return 0;
}

int cmd_render(RunContext& ctx, const RenderArgs& a) {
  require_file(a.input, "input corpus");
  RenderFormat format;
  if (a.format == "ansi") {
    format = RenderFormat::ansi;
  } else if (a.format == "html") {
    format = RenderFormat::html;
  } else {
    throw ConfigError("--format must be ansi or html");
  }
  const Corpus corpus = load_corpus(a.input);
  auto it = std::find_if(corpus.begin(), corpus.end(), [&](const Document& d) { return d.id == a.doc_id; });
  if (it == corpus.end()) throw ConfigError("unknown document id '" + a.doc_id + "'");
  const std::string rendered = render_document(*it, format);
  if (a.output) {
    auto out = open_output(*a.output);
    out << rendered;
  } else {
    ctx.out << rendered;
  }
  return 0;
}

int cmd_baseline_dict(RunContext& ctx, const DictBaselineArgs& a) {
  require_file(a.positive, "positive word list");
  require_file(a.negative, "negative word list");
  require_file(a.input, "input corpus");
  Manifest manifest(ctx);
  manifest.input("positive", a.positive);
  manifest.input("negative", a.negative);
  manifest.input("corpus", a.input);
  const auto dict = load_dictionary(a.positive, a.negative, a.name);
  Corpus corpus = load_corpus(a.input);
  std::size_t sentences = 0, neutral = 0;
  for (auto& doc : corpus) {
    for (auto& s : doc.sentences) {
      s.predicted_label = dictionary_classify(sentence_tokens(s), dict);
      s.score.reset();
      ++sentences;
      neutral += *s.predicted_label == Prediction::neutral ? 1 : 0;
    }
    doc.predicted_label = dictionary_classify(document_tokens(doc), dict);
  }
  strip_embeddings(corpus);
  save_corpus(a.output, corpus);
  manifest.output("corpus", a.output);
  manifest.write(a.output);
  ctx.out << "dictionary '" << dict.name << "': " << dict.positive_terms.size() << " positive, "
          << dict.negative_terms.size() << " negative terms\n";
  ctx.out << "sentences: " << sentences << ", neutral: " << neutral << '\n';
  return 0;
}

int cmd_baseline_bow(RunContext& ctx, const BowBaselineArgs& a) {
  require_file(a.train, "training corpus");
  require_file(a.input, "input corpus");
  Manifest manifest(ctx);
  manifest.input("train", a.train);
  manifest.input("corpus", a.input);
  std::vector<std::vector<std::string>> docs;
  std::vector<int> labels;
  for (const auto& d : load_corpus(a.train)) {
    if (!d.label) continue;
    docs.push_back(document_tokens(d));
    labels.push_back(static_cast<int>(*d.label));
  }
  if (docs.empty()) throw DataError("training corpus has no labeled documents");
  const BowModel model = train_bow_logreg(docs, labels, ctx.settings.l2_strength, ctx.settings.train.seed,
                                          a.min_count);
  Corpus corpus = load_corpus(a.input);
  for (auto& doc : corpus) {
    for (auto& s : doc.sentences) {
      const auto p = bow_predict(model, sentence_tokens(s));
      s.predicted_label = as_prediction(p.label);
      s.score = p.score;
    }
    doc.predicted_label = as_prediction(bow_predict(model, document_tokens(doc)).label);
  }
  strip_embeddings(corpus);
  save_corpus(a.output, corpus);
  manifest.output("corpus", a.output);
  manifest.write(a.output);
  ctx.out << "bag-of-words logistic regression: " << model.index.size() << " features, "
          << model.classifier.iterations << " iterations"
          << (model.classifier.converged ? " (converged)" : " (iteration cap reached)") << '\n';
  return 0;
}

int cmd_baseline_embed(RunContext& ctx, const EmbedBaselineArgs& a) {
  require_file(a.train, "training corpus");
  require_file(a.input, "input corpus");
  Manifest manifest(ctx);
  manifest.input("train", a.train);
  manifest.input("corpus", a.input);
  Corpus train_corpus = labeled_with_sentences(load_corpus(a.train), ctx.err);
  if (train_corpus.empty()) throw DataError("training corpus has no labeled documents with sentences");
  const std::size_t dim = ensure_embeddings(ctx, train_corpus, a.embedding, manifest).first;

  auto doc_vector = [dim](const Document& d) {
    std::vector<double> v(dim, 0.0);
    for (const auto& s : d.sentences) {
      for (std::size_t i = 0; i < dim; ++i) v[i] += (*s.embedding)[i];
    }
    for (auto& x : v) x /= static_cast<double>(d.sentences.size());
    return dense_to_sparse(v);
  };
  std::vector<SparseVector> features;
  std::vector<int> labels;
  for (const auto& d : train_corpus) {
    features.push_back(doc_vector(d));
    labels.push_back(static_cast<int>(*d.label));
  }
  const LogRegModel model = train_logreg(features, labels, dim, ctx.settings.l2_strength, ctx.settings.train.seed);

  Corpus corpus = load_corpus(a.input);
  EmbeddingSource src = a.embedding;
  src.dim = dim;
  const bool computed = corpus.empty() ? false : ensure_embeddings(ctx, corpus, src, manifest).second;
  for (auto& doc : corpus) {
    for (auto& s : doc.sentences) {
      const auto p = logreg_predict(model, dense_to_sparse(*s.embedding));
      s.predicted_label = as_prediction(p.label);
      s.score = p.score;
    }
    if (!doc.sentences.empty()) doc.predicted_label = as_prediction(logreg_predict(model, doc_vector(doc)).label);
  }
  if (computed) strip_embeddings(corpus);
  save_corpus(a.output, corpus);
  manifest.output("corpus", a.output);
  manifest.write(a.output);
  ctx.out << "embedding logistic regression: dim " << dim << ", " << model.iterations << " iterations"
          << (model.converged ? " (converged)" : " (iteration cap reached)") << '\n';
  return 0;
}

int cmd_split(RunContext& ctx, const SplitArgs& a) {
  require_file(a.input, "input corpus");
  Manifest manifest(ctx);
  manifest.input("corpus", a.input);
  const Corpus corpus = load_corpus(a.input);
  const auto [train_part, test_part] = temporal_split(corpus, ctx.settings.split_ratio);
  save_corpus(a.train_output, train_part);
  save_corpus(a.test_output, test_part);
  manifest.output("train", a.train_output);
  manifest.output("test", a.test_output);
  manifest.write(a.train_output);
  ctx.out << "train: " << train_part.size() << " documents";
  if (!train_part.empty()) ctx.out << " (" << format_date(train_part.back().published_at) << " and older)";
  ctx.out << "\ntest:  " << test_part.size() << " documents";
  if (!test_part.empty()) ctx.out << " (" << format_date(test_part.front().published_at) << " and newer)";
  ctx.out << '\n';
  return 0;
}

int cmd_distribution(RunContext& ctx, const DistributionArgs& a) {
  require_file(a.input, "input corpus");
  const auto dist = label_distribution(load_corpus(a.input));
  print_label_distribution(ctx.out, dist);
  return 0;
}

int cmd_synth(RunContext& ctx, const SynthArgs& a) {
  Manifest manifest(ctx);
  const auto synth = generate_synthetic(a.groups, a.per_group, a.dim, a.separation, a.noise,
                                        ctx.settings.train.seed);
  Corpus corpus;
  const std::chrono::sys_days base = Date{std::chrono::year{2020}, std::chrono::January, std::chrono::day{1}};
  for (std::size_t k = 0; k < synth.dataset.groups.size(); ++k) {
    const auto& g = synth.dataset.groups[k];
    Document d;
    char id[32];
    std::snprintf(id, sizeof id, "syn-%05zu", k);
    d.id = id;
    d.ticker = "SYN";
    d.published_at = Date{base + std::chrono::days{static_cast<int>(k)}};
    d.label = g.label == 1 ? Polarity::positive : Polarity::negative;
    for (std::size_t r = 0; r < g.instances.rows(); ++r) {
      SentenceInstance s;
      s.text = "synthetic sentence " + std::to_string(k) + "." + std::to_string(r) + ".";
      const auto row = g.instances.row(r);
      s.embedding = std::vector<double>(row.begin(), row.end());
      s.gold_label = synth.instance_labels[k][r] == 1 ? Polarity::positive : Polarity::negative;
      if (!d.raw_text.empty()) d.raw_text += ' ';
      d.raw_text += s.text;
      d.sentences.push_back(std::move(s));
    }
    corpus.push_back(std::move(d));
  }
  save_corpus(a.output, corpus);
  manifest.output("corpus", a.output);
  manifest.write(a.output);
  ctx.out << "wrote " << corpus.size() << " synthetic documents (" << a.per_group << " sentences each, dim "
          << a.dim << ")\n";
  return 0;
}

}  // namespace milsent::cli
