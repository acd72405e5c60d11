#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "milsent/corpus.hpp"

namespace milsent {

enum class EmbeddingProvider { precomputed_sentence, word_average, hash_fallback };

std::string_view to_string(EmbeddingProvider p);

/// Fixed-dimension vectors keyed by word or by sentence id. Immutable once built.
class EmbeddingStore {
 public:
  using Vector = std::vector<double>;

  static EmbeddingStore word_vectors(std::size_t dim, std::unordered_map<std::string, Vector> vectors);
  static EmbeddingStore sentence_vectors(std::size_t dim, std::unordered_map<std::string, Vector> vectors);
  static EmbeddingStore hash_fallback(std::size_t dim = 300, std::uint64_t seed = 0);

  std::size_t dim() const { return dim_; }
  EmbeddingProvider provider() const { return provider_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t size() const { return vectors_.size(); }
  const Vector* find(std::string_view key) const;

 private:
  EmbeddingStore(std::size_t dim, EmbeddingProvider provider, std::uint64_t seed,
                 std::unordered_map<std::string, Vector> vectors);

  std::size_t dim_ = 0;
  EmbeddingProvider provider_ = EmbeddingProvider::hash_fallback;
  std::uint64_t seed_ = 0;
  std::unordered_map<std::string, Vector> vectors_;
};

// Word-vector text format: `term v1 ... vd` per line. A leading
// word2vec-style `count dim` header line is accepted and skipped.
EmbeddingStore read_word_vectors(std::istream& in, std::string_view source = "<stream>");
EmbeddingStore load_embeddings(const std::filesystem::path& path);

// Sentence-vector format: `sentence_id<TAB>v1 v2 ... vd`.
EmbeddingStore read_sentence_vectors(std::istream& in, std::string_view source = "<stream>");
EmbeddingStore load_sentence_embeddings(const std::filesystem::path& path);

/// Key used for precomputed sentence vectors: `<doc_id>:<sentence_index>`.
std::string sentence_key(std::string_view doc_id, std::size_t sentence_index);

/// Deterministic unit vector for one token (hash-fallback provider).
std::vector<double> hash_token_vector(std::string_view token, std::size_t dim, std::uint64_t seed);

struct SentenceEmbedding {
  std::vector<double> vector;
  std::size_t oov_tokens = 0;
  bool all_oov = false;  // true => zero vector under word-average
};

/// Throws DataError for an empty token sequence, or for a missing sentence
/// key under the precomputed-sentence provider.
SentenceEmbedding embed_sentence(std::span<const std::string> tokens, const EmbeddingStore& store,
                                 std::string_view key = {});

struct EmbedSummary {
  std::size_t sentences = 0;
  std::size_t zero_vector_sentences = 0;
  std::size_t oov_tokens = 0;
  std::size_t total_tokens = 0;
};

/// Fills `embedding` for every sentence, tokenizing the text when tokens are absent.
EmbedSummary embed_corpus(Corpus& corpus, const EmbeddingStore& store);

}  // namespace milsent
