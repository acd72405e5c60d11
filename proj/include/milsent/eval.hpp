#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "milsent/corpus.hpp"

namespace milsent {

/// Chronological split (ties by id): the first ceil(ratio * n) documents train.
std::pair<Corpus, Corpus> temporal_split(std::span<const Document> corpus, double ratio = 0.8);

struct EvalReport {
  double accuracy = 0.0;
  double recall = 0.0;
  double precision = 0.0;
  double f1 = 0.0;
  double neutral_rate = 0.0;
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0, neutral = 0;
  std::size_t total = 0;
  // Zero denominators: the metric is reported as 0 and flagged here.
  bool recall_undefined = false;
  bool precision_undefined = false;
  bool f1_undefined = false;
};

/// Positive is the reference class. Neutral predictions count as errors for
/// accuracy and are left out of the precision/recall confusion counts.
EvalReport score_predictions(std::span<const Prediction> predicted, std::span<const Polarity> gold);

struct LabelDistribution {
  // [market reaction][sentence label], index 0 = positive, 1 = negative.
  std::array<std::array<std::size_t, 2>, 2> counts{};
  std::size_t documents = 0;
  std::size_t both = 0;
  std::size_t only_positive = 0;
  std::size_t only_negative = 0;

  double row_share(std::size_t reaction, std::size_t sentence_label) const;
};

/// Cross-tab of document label against predicted sentence labels, plus the
/// polarity composition of each document. Unlabeled documents and sentences
/// without a binary prediction are skipped.
LabelDistribution label_distribution(std::span<const Document> corpus);

void print_label_distribution(std::ostream& out, const LabelDistribution& dist);

struct MethodReport {
  std::string method;
  EvalReport report;
  bool emits_neutral = false;
};

/// Aligned text table: Method, Accuracy, Recall, Precision, F1-Score, Neutral.
void print_report_table(std::ostream& out, std::span<const MethodReport> rows, std::string_view title);
/// Same content as JSON.
std::string report_json(std::span<const MethodReport> rows, std::string_view level);

}  // namespace milsent
