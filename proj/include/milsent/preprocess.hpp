#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "milsent/corpus.hpp"

namespace milsent {

inline constexpr std::string_view kUnkToken = "<unk>";
inline constexpr std::string_view kNumPosToken = "<num_pos>";
inline constexpr std::string_view kNumNegToken = "<num_neg>";
inline constexpr std::string_view kDateToken = "<date>";
inline constexpr std::string_view kUrlToken = "<url>";

bool is_special_token(std::string_view token);

struct PreprocessConfig {
  std::size_t min_doc_words = 50;
  std::size_t min_count = 5;
  double length_percentile = 0.01;
  // Text after the first match of any of these is discarded (contact blocks, footers).
  std::vector<std::string> cutoff_patterns;
  std::vector<std::string> date_patterns = default_date_patterns();
  std::vector<std::string> url_patterns = default_url_patterns();
  // Group 1: preserved prefix, group 2: optional sign, group 3: magnitude.
  std::string number_pattern = default_number_pattern();

  static std::vector<std::string> default_date_patterns();
  static std::vector<std::string> default_url_patterns();
  static std::string default_number_pattern();

  /// Throws ConfigError for out-of-range values or an invalid regular expression.
  void validate() const;
};

/// Compiled form of the pattern lists; build once and reuse across documents.
class TextCleaner {
 public:
  explicit TextCleaner(const PreprocessConfig& config);
  ~TextCleaner();
  TextCleaner(TextCleaner&&) noexcept;
  TextCleaner& operator=(TextCleaner&&) noexcept;

  std::string clean(std::string_view text) const;

 private:
  struct Patterns;
  std::unique_ptr<Patterns> patterns_;
};

/// Truncate at the first cutoff match, replace URLs, dates and signed
/// numbers by their placeholder tokens, lowercase, collapse whitespace.
std::string clean_text(std::string_view text, const PreprocessConfig& config);

/// Rule-based splitter: terminal punctuation ends a sentence unless it belongs
/// to a known abbreviation, a single-letter initial, or sits inside a number.
std::vector<std::string> split_sentences(std::string_view text);

std::vector<std::string> tokenize(std::string_view sentence);

class Vocabulary {
 public:
  Vocabulary() = default;
  Vocabulary(std::map<std::string, std::size_t, std::less<>> counts, std::size_t min_count);

  bool contains(std::string_view term) const;
  std::size_t count(std::string_view term) const;
  std::size_t size() const { return counts_.size(); }
  std::size_t min_count() const { return min_count_; }
  const std::map<std::string, std::size_t, std::less<>>& terms() const { return counts_; }

 private:
  std::map<std::string, std::size_t, std::less<>> counts_;
  std::size_t min_count_ = 5;
};

Vocabulary build_vocabulary(std::span<const std::vector<std::string>> token_sequences,
                            std::size_t min_count);

std::vector<std::string> apply_vocabulary(std::span<const std::string> tokens,
                                          const Vocabulary& vocab);

/// Whitespace-delimited word count of the raw text (sentences if the raw text is empty).
std::size_t document_word_count(const Document& doc);

/// Linear-interpolation quantile of a sample (the R type 7 / NumPy default rule).
double empirical_quantile(std::vector<double> sample, double q);

/// Drops short documents, then documents whose sentence count lies strictly
/// outside the [q, 1-q] quantile band. Order of survivors is preserved.
Corpus filter_corpus(std::span<const Document> corpus, const PreprocessConfig& config);

}  // namespace milsent
