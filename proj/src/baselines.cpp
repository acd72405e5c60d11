#include "milsent/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>

#include "milsent/error.hpp"
#include "milsent/mil.hpp"
#include "milsent/random.hpp"

namespace milsent {

namespace {

std::set<std::string, std::less<>> read_terms(std::istream& in) {
  std::set<std::string, std::less<>> terms;
  std::string line;
  while (std::getline(in, line)) {
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t\r");
    std::string term = line.substr(b, e - b + 1);
    std::transform(term.begin(), term.end(), term.begin(),
                   [](char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; });
    terms.insert(std::move(term));
  }
  return terms;
}

// Log(1 + e^z) without overflow.
double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

}  // namespace

PolarityDictionary make_dictionary(std::string name, std::istream& positive, std::istream& negative) {
  PolarityDictionary dict;
  dict.name = std::move(name);
  dict.positive_terms = read_terms(positive);
  dict.negative_terms = read_terms(negative);
  for (const auto& t : dict.positive_terms) {
    if (dict.negative_terms.contains(t)) {
      throw DataError("term '" + t + "' appears in both the positive and the negative list");
    }
  }
  return dict;
}

PolarityDictionary load_dictionary(const std::filesystem::path& positive_path,
                                   const std::filesystem::path& negative_path, std::string name) {
  std::ifstream pos(positive_path);
  if (!pos) throw DataError("cannot open word list '" + positive_path.string() + "'");
  std::ifstream neg(negative_path);
  if (!neg) throw DataError("cannot open word list '" + negative_path.string() + "'");
  if (name.empty()) name = positive_path.stem().string();
  return make_dictionary(std::move(name), pos, neg);
}

DictionaryHits count_hits(std::span<const std::string> tokens, const PolarityDictionary& dict) {
  DictionaryHits hits;
  for (const auto& t : tokens) {
    if (dict.positive_terms.contains(t)) {
      ++hits.positive;
    } else if (dict.negative_terms.contains(t)) {
      ++hits.negative;
    }
  }
  return hits;
}

Prediction dictionary_classify(std::span<const std::string> tokens, const PolarityDictionary& dict) {
  const auto hits = count_hits(tokens, dict);
  if (hits.positive > hits.negative) return Prediction::positive;
  if (hits.negative > hits.positive) return Prediction::negative;
  return Prediction::neutral;
}

double SparseVector::dot(std::span<const double> dense) const {
  double s = 0.0;
  for (std::size_t i = 0; i < index.size(); ++i) s += value[i] * dense[index[i]];
  return s;
}

SparseVector dense_to_sparse(std::span<const double> dense) {
  SparseVector v;
  v.index.reserve(dense.size());
  v.value.reserve(dense.size());
  for (std::size_t i = 0; i < dense.size(); ++i) {
    v.index.push_back(static_cast<std::uint32_t>(i));
    v.value.push_back(dense[i]);
  }
  return v;
}

SparseVector operator+(const SparseVector& a, const SparseVector& b) {
  SparseVector out;
  std::size_t i = 0, j = 0;
  while (i < a.index.size() || j < b.index.size()) {
    if (j == b.index.size() || (i < a.index.size() && a.index[i] < b.index[j])) {
      out.index.push_back(a.index[i]);
      out.value.push_back(a.value[i++]);
    } else if (i == a.index.size() || b.index[j] < a.index[i]) {
      out.index.push_back(b.index[j]);
      out.value.push_back(b.value[j++]);
    } else {
      out.index.push_back(a.index[i]);
      out.value.push_back(a.value[i++] + b.value[j++]);
    }
  }
  return out;
}

VocabularyIndex build_vocabulary_index(std::span<const std::vector<std::string>> documents,
                                       std::size_t min_count) {
  std::map<std::string, std::size_t, std::less<>> counts;
  for (const auto& doc : documents) {
    for (const auto& t : doc) ++counts[t];
  }
  VocabularyIndex index;
  std::uint32_t next = 0;
  for (const auto& [term, n] : counts) {
    if (n >= min_count) index.emplace(term, next++);
  }
  return index;
}

SparseVector bow_featurize(std::span<const std::string> tokens, const VocabularyIndex& index) {
  std::map<std::uint32_t, double> counts;
  for (const auto& t : tokens) {
    auto it = index.find(t);
    if (it != index.end()) counts[it->second] += 1.0;
  }
  SparseVector v;
  for (const auto& [col, n] : counts) {
    v.index.push_back(col);
    v.value.push_back(n);
  }
  return v;
}

double logreg_objective(std::span<const double> weights, double intercept,
                        std::span<const SparseVector> features, std::span<const int> labels,
                        double l2_strength) {
  if (features.size() != labels.size()) throw DataError("feature/label count mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < features.size(); ++i) {
    const double z = features[i].dot(weights) + intercept;
    // -log p(y|z) = softplus(z) - y z
    total += softplus(z) - static_cast<double>(labels[i]) * z;
  }
  double norm_sq = 0.0;
  for (double w : weights) norm_sq += w * w;
  return total / static_cast<double>(features.size()) + 0.5 * l2_strength * norm_sq;
}

std::vector<double> logreg_gradient(std::span<const double> weights, double intercept,
                                    std::span<const SparseVector> features,
                                    std::span<const int> labels, double l2_strength) {
  if (features.size() != labels.size()) throw DataError("feature/label count mismatch");
  std::vector<double> g(weights.size() + 1, 0.0);
  const double inv_n = 1.0 / static_cast<double>(features.size());
  for (std::size_t i = 0; i < features.size(); ++i) {
    const double z = features[i].dot(weights) + intercept;
    const double r = (sigmoid(z) - static_cast<double>(labels[i])) * inv_n;
    const auto& x = features[i];
    for (std::size_t k = 0; k < x.index.size(); ++k) g[x.index[k]] += r * x.value[k];
    g[weights.size()] += r;
  }
  for (std::size_t j = 0; j < weights.size(); ++j) g[j] += l2_strength * weights[j];
  return g;
}

LogRegModel train_logreg(std::span<const SparseVector> features, std::span<const int> labels,
                         std::size_t n_features, double l2_strength, std::uint64_t seed,
                         const LogRegOptions& options, std::vector<double>* objective_trace) {
  if (features.size() != labels.size()) throw DataError("feature/label count mismatch");
  if (!(l2_strength >= 0.0) || !std::isfinite(l2_strength)) throw ConfigError("l2_strength must be >= 0");
  bool has_pos = false, has_neg = false;
  for (int y : labels) {
    if (y != 0 && y != 1) throw DataError("logistic regression labels must be 0 or 1");
    (y == 1 ? has_pos : has_neg) = true;
  }
  if (!has_pos || !has_neg) throw DataError("logistic regression needs examples of both classes");
  for (const auto& x : features) {
    if (!x.index.empty() && x.index.back() >= n_features) throw DataError("feature index out of range");
  }

  // Curvature bound of the mean log-loss: 0.25 * mean(|x|^2 + 1).
  double mean_norm_sq = 0.0;
  for (const auto& x : features) {
    double s = 1.0;
    for (double v : x.value) s += v * v;
    mean_norm_sq += s;
  }
  mean_norm_sq /= static_cast<double>(features.size());
  const double step = 1.0 / (0.25 * mean_norm_sq + l2_strength);

  LogRegModel model;
  model.l2_strength = l2_strength;
  model.weights.resize(n_features);
  Rng rng(seed);
  for (auto& w : model.weights) w = rng.uniform(-0.01, 0.01);

  for (std::size_t it = 0; it < options.max_iterations; ++it) {
    if (objective_trace) {
      objective_trace->push_back(logreg_objective(model.weights, model.intercept, features, labels, l2_strength));
    }
    const auto g = logreg_gradient(model.weights, model.intercept, features, labels, l2_strength);
    double norm_sq = 0.0;
    for (double v : g) norm_sq += v * v;
    if (std::sqrt(norm_sq) < options.gradient_tolerance) {
      model.converged = true;
      break;
    }
    for (std::size_t j = 0; j < n_features; ++j) model.weights[j] -= step * g[j];
    model.intercept -= step * g[n_features];
    model.iterations = it + 1;
  }
  return model;
}

double logreg_score(const LogRegModel& model, const SparseVector& x) {
  double z = model.intercept;
  for (std::size_t k = 0; k < x.index.size(); ++k) {
    if (x.index[k] < model.weights.size()) z += model.weights[x.index[k]] * x.value[k];
  }
  return sigmoid(z);
}

SentencePrediction logreg_predict(const LogRegModel& model, const SparseVector& x) {
  const double s = logreg_score(model, x);
  return {s >= 0.5 ? Polarity::positive : Polarity::negative, s};
}

BowModel train_bow_logreg(std::span<const std::vector<std::string>> documents,
                          std::span<const int> labels, double l2_strength, std::uint64_t seed,
                          std::size_t min_count) {
  BowModel model;
  model.index = build_vocabulary_index(documents, min_count);
  std::vector<SparseVector> features;
  features.reserve(documents.size());
  for (const auto& d : documents) features.push_back(bow_featurize(d, model.index));
  model.classifier = train_logreg(features, labels, model.index.size(), l2_strength, seed);
  return model;
}

SentencePrediction bow_predict(const BowModel& model, std::span<const std::string> tokens) {
  return logreg_predict(model.classifier, bow_featurize(tokens, model.index));
}

}  // namespace milsent
