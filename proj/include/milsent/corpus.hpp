#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace milsent {

/// Binary polarity. Numeric value matches the MIL group label (0 negative, 1 positive).
enum class Polarity { negative = 0, positive = 1 };

/// Classifier output; only dictionary methods ever emit `neutral`.
enum class Prediction { negative = 0, positive = 1, neutral = 2 };

using Date = std::chrono::year_month_day;

Date parse_date(std::string_view iso);  // YYYY-MM-DD, throws DataError
std::string format_date(Date date);

std::string_view to_string(Polarity p);       // "pos" / "neg"
std::string_view to_string(Prediction p);     // "pos" / "neg" / "neutral"
std::optional<Polarity> parse_polarity(std::string_view s);
std::optional<Prediction> parse_prediction(std::string_view s);
constexpr Prediction as_prediction(Polarity p) {
  return p == Polarity::positive ? Prediction::positive : Prediction::negative;
}

struct SentencePrediction {
  Polarity label;
  double score;  // positive <=> score >= 0.5
};

struct SentenceInstance {
  std::string text;
  std::vector<std::string> tokens;
  std::optional<std::vector<double>> embedding;
  std::optional<Prediction> predicted_label;
  // Present only for score-producing classifiers; positive <=> score >= 0.5.
  std::optional<double> score;
  // Reference annotation for sentence-level evaluation.
  std::optional<Polarity> gold_label;

  bool operator==(const SentenceInstance&) const = default;
};

struct Document {
  std::string id;
  std::string ticker;
  Date published_at{};
  std::string raw_text;
  std::vector<SentenceInstance> sentences;
  std::optional<Polarity> label;
  std::optional<double> abnormal_return;
  std::optional<Prediction> predicted_label;

  bool operator==(const Document&) const = default;
};

using Corpus = std::vector<Document>;

/// Row-major block of instance vectors, one row per sentence.
class InstanceMatrix {
 public:
  InstanceMatrix() = default;
  InstanceMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), values_(rows * cols, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::span<const double> row(std::size_t i) const { return {values_.data() + i * cols_, cols_}; }
  std::span<double> row(std::size_t i) { return {values_.data() + i * cols_, cols_}; }

  void append_row(std::span<const double> values);

  bool operator==(const InstanceMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

struct MilGroup {
  InstanceMatrix instances;
  int label = 0;  // 0 negative, 1 positive
};

struct MilDataset {
  std::vector<MilGroup> groups;
  std::size_t dim = 0;

  std::size_t instance_count() const;
};

// Line-delimited JSON corpus. Errors carry `source:line`.
Corpus read_corpus(std::istream& in, std::string_view source = "<stream>");
Corpus load_corpus(const std::filesystem::path& path);
void write_corpus(std::ostream& out, std::span<const Document> corpus);
void save_corpus(const std::filesystem::path& path, std::span<const Document> corpus);

Document parse_document(std::string_view json_line);
std::string serialize_document(const Document& doc);

/// One group per document, sentence order preserved. Throws DataError on a
/// missing label, missing embedding or inconsistent dimension.
MilDataset to_mil_dataset(std::span<const Document> corpus);

}  // namespace milsent
