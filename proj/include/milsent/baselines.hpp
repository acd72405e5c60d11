#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "milsent/corpus.hpp"

namespace milsent {

// ---------------------------------------------------------------------------
// Dictionary baseline

struct PolarityDictionary {
  std::string name;
  std::set<std::string, std::less<>> positive_terms;
  std::set<std::string, std::less<>> negative_terms;
};

/// Parses two word lists (one term per line), lowercases and deduplicates.
/// Throws DataError naming the first term found in both lists.
PolarityDictionary make_dictionary(std::string name, std::istream& positive, std::istream& negative);
PolarityDictionary load_dictionary(const std::filesystem::path& positive_path,
                                   const std::filesystem::path& negative_path,
                                   std::string name = {});

struct DictionaryHits {
  std::size_t positive = 0;
  std::size_t negative = 0;
};

DictionaryHits count_hits(std::span<const std::string> tokens, const PolarityDictionary& dict);

/// Positive if positive hits outnumber negative ones, negative if the
/// reverse, neutral on a tie (including no hits). No negation handling.
Prediction dictionary_classify(std::span<const std::string> tokens, const PolarityDictionary& dict);

// ---------------------------------------------------------------------------
// Logistic regression on sparse features

/// Sorted column indices with their values.
struct SparseVector {
  std::vector<std::uint32_t> index;
  std::vector<double> value;

  double dot(std::span<const double> dense) const;
  bool operator==(const SparseVector&) const = default;
};

SparseVector dense_to_sparse(std::span<const double> dense);
SparseVector operator+(const SparseVector& a, const SparseVector& b);

using VocabularyIndex = std::map<std::string, std::uint32_t, std::less<>>;

/// Columns assigned in lexicographic term order.
VocabularyIndex build_vocabulary_index(std::span<const std::vector<std::string>> documents,
                                       std::size_t min_count = 1);

/// Raw term frequencies; out-of-index tokens are ignored.
SparseVector bow_featurize(std::span<const std::string> tokens, const VocabularyIndex& index);

struct LogRegModel {
  std::vector<double> weights;
  double intercept = 0.0;
  double l2_strength = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

struct LogRegOptions {
  double gradient_tolerance = 1e-6;
  std::size_t max_iterations = 10000;
};

/// Mean log-loss plus (l2/2)|w|^2; the intercept is not penalized.
double logreg_objective(std::span<const double> weights, double intercept,
                        std::span<const SparseVector> features, std::span<const int> labels,
                        double l2_strength);

/// Gradient of logreg_objective; entry `weights.size()` is the intercept derivative.
std::vector<double> logreg_gradient(std::span<const double> weights, double intercept,
                                    std::span<const SparseVector> features,
                                    std::span<const int> labels, double l2_strength);

/// Full-batch gradient descent with step 1/L (L a bound on the objective's
/// curvature), so the objective never increases. Labels are 0/1.
LogRegModel train_logreg(std::span<const SparseVector> features, std::span<const int> labels,
                         std::size_t n_features, double l2_strength, std::uint64_t seed,
                         const LogRegOptions& options = {},
                         std::vector<double>* objective_trace = nullptr);

double logreg_score(const LogRegModel& model, const SparseVector& x);
SentencePrediction logreg_predict(const LogRegModel& model, const SparseVector& x);

struct BowModel {
  VocabularyIndex index;
  LogRegModel classifier;
};

BowModel train_bow_logreg(std::span<const std::vector<std::string>> documents,
                          std::span<const int> labels, double l2_strength, std::uint64_t seed,
                          std::size_t min_count = 1);

SentencePrediction bow_predict(const BowModel& model, std::span<const std::string> tokens);

}  // namespace milsent
