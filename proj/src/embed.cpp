#include "milsent/embed.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include "milsent/error.hpp"
#include "milsent/preprocess.hpp"
#include "milsent/random.hpp"

namespace milsent {

namespace {

bool is_blank(char c) { return c == ' ' || c == '\t' || c == '\r'; }

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_blank(line[i])) ++i;
    const std::size_t b = i;
    while (i < line.size() && !is_blank(line[i])) ++i;
    if (i > b) fields.push_back(line.substr(b, i - b));
  }
  return fields;
}

bool parse_double(std::string_view s, double& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size() && std::isfinite(out);
}

bool is_unsigned_integer(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

[[noreturn]] void fail_at(std::string_view source, std::size_t line_no, const std::string& what) {
  std::ostringstream msg;
  msg << source << ":" << line_no << ": " << what;
  throw DataError(msg.str());
}

std::vector<double> parse_vector(std::span<const std::string_view> fields, std::string_view source,
                                 std::size_t line_no) {
  std::vector<double> v;
  v.reserve(fields.size());
  for (auto f : fields) {
    double x = 0.0;
    if (!parse_double(f, x)) fail_at(source, line_no, "invalid vector component '" + std::string(f) + "'");
    v.push_back(x);
  }
  return v;
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::string_view to_string(EmbeddingProvider p) {
  switch (p) {
    case EmbeddingProvider::precomputed_sentence: return "precomputed-sentence";
    case EmbeddingProvider::word_average: return "word-average";
    case EmbeddingProvider::hash_fallback: return "hash-fallback";
  }
  return "unknown";
}

EmbeddingStore::EmbeddingStore(std::size_t dim, EmbeddingProvider provider, std::uint64_t seed,
                               std::unordered_map<std::string, Vector> vectors)
    : dim_(dim), provider_(provider), seed_(seed), vectors_(std::move(vectors)) {
  if (dim_ == 0) throw DataError("embedding dimension must be positive");
  for (const auto& [key, v] : vectors_) {
    if (v.size() != dim_) throw DataError("vector for '" + key + "' has the wrong dimension");
  }
}

EmbeddingStore EmbeddingStore::word_vectors(std::size_t dim,
                                            std::unordered_map<std::string, Vector> vectors) {
  return EmbeddingStore(dim, EmbeddingProvider::word_average, 0, std::move(vectors));
}

EmbeddingStore EmbeddingStore::sentence_vectors(std::size_t dim,
                                                std::unordered_map<std::string, Vector> vectors) {
  return EmbeddingStore(dim, EmbeddingProvider::precomputed_sentence, 0, std::move(vectors));
}

EmbeddingStore EmbeddingStore::hash_fallback(std::size_t dim, std::uint64_t seed) {
  return EmbeddingStore(dim, EmbeddingProvider::hash_fallback, seed, {});
}

const EmbeddingStore::Vector* EmbeddingStore::find(std::string_view key) const {
  auto it = vectors_.find(std::string(key));
  return it == vectors_.end() ? nullptr : &it->second;
}

EmbeddingStore read_word_vectors(std::istream& in, std::string_view source) {
  std::unordered_map<std::string, std::vector<double>> vectors;
  std::size_t dim = 0;
  std::string line;
  std::size_t line_no = 0;
  bool first_record = true;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = split_fields(line);
    if (fields.empty()) continue;
    if (first_record && fields.size() == 2 && is_unsigned_integer(fields[0]) &&
        is_unsigned_integer(fields[1])) {
      first_record = false;
      continue;
    }
    first_record = false;
    if (fields.size() < 2) fail_at(source, line_no, "expected a term followed by vector components");
    auto v = parse_vector(std::span(fields).subspan(1), source, line_no);
    if (dim == 0) dim = v.size();
    if (v.size() != dim) {
      fail_at(source, line_no, "inconsistent dimension: expected " + std::to_string(dim) + ", got " +
                                   std::to_string(v.size()));
    }
    vectors.insert_or_assign(std::string(fields[0]), std::move(v));
  }
  if (dim == 0) throw DataError(std::string(source) + ": no vectors found (dimension undeterminable)");
  return EmbeddingStore::word_vectors(dim, std::move(vectors));
}

EmbeddingStore load_embeddings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open embedding file '" + path.string() + "'");
  return read_word_vectors(in, path.string());
}

EmbeddingStore read_sentence_vectors(std::istream& in, std::string_view source) {
  std::unordered_map<std::string, std::vector<double>> vectors;
  std::size_t dim = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) fail_at(source, line_no, "expected 'sentence_id<TAB>vector'");
    const std::string key = line.substr(0, tab);
    const auto fields = split_fields(std::string_view(line).substr(tab + 1));
    if (fields.empty()) fail_at(source, line_no, "empty vector");
    auto v = parse_vector(fields, source, line_no);
    if (dim == 0) dim = v.size();
    if (v.size() != dim) {
      fail_at(source, line_no, "inconsistent dimension: expected " + std::to_string(dim) + ", got " +
                                   std::to_string(v.size()));
    }
    if (!vectors.emplace(key, std::move(v)).second) fail_at(source, line_no, "duplicate sentence id '" + key + "'");
  }
  if (dim == 0) throw DataError(std::string(source) + ": no vectors found (dimension undeterminable)");
  return EmbeddingStore::sentence_vectors(dim, std::move(vectors));
}

EmbeddingStore load_sentence_embeddings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open sentence-vector file '" + path.string() + "'");
  return read_sentence_vectors(in, path.string());
}

std::string sentence_key(std::string_view doc_id, std::size_t sentence_index) {
  return std::string(doc_id) + ":" + std::to_string(sentence_index);
}

std::vector<double> hash_token_vector(std::string_view token, std::size_t dim, std::uint64_t seed) {
  std::vector<double> v(dim);
  std::uint64_t state = fnv1a(token) ^ mix64(seed);
  double norm_sq = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    state = mix64(state);
    const double u = static_cast<double>(state >> 11) * 0x1.0p-53;  // [0, 1)
    v[i] = 2.0 * u - 1.0;
    norm_sq += v[i] * v[i];
  }
  if (norm_sq == 0.0) {
    v[0] = 1.0;
    return v;
  }
  const double norm = std::sqrt(norm_sq);
  for (auto& x : v) x /= norm;
  return v;
}

SentenceEmbedding embed_sentence(std::span<const std::string> tokens, const EmbeddingStore& store,
                                 std::string_view key) {
  SentenceEmbedding out;
  if (store.provider() == EmbeddingProvider::precomputed_sentence) {
    const auto* v = store.find(key);
    if (!v) throw DataError("no precomputed vector for sentence '" + std::string(key) + "'");
    out.vector = *v;
    return out;
  }
  if (tokens.empty()) throw DataError("cannot embed an empty token sequence");

  out.vector.assign(store.dim(), 0.0);
  std::size_t used = 0;
  for (const auto& t : tokens) {
    if (store.provider() == EmbeddingProvider::hash_fallback) {
      const auto v = hash_token_vector(t, store.dim(), store.seed());
      for (std::size_t i = 0; i < v.size(); ++i) out.vector[i] += v[i];
      ++used;
      continue;
    }
    const auto* v = store.find(t);
    if (!v) {
      ++out.oov_tokens;
      continue;
    }
    for (std::size_t i = 0; i < v->size(); ++i) out.vector[i] += (*v)[i];
    ++used;
  }
  if (used == 0) {
    out.all_oov = true;
    return out;
  }
  for (auto& x : out.vector) x /= static_cast<double>(used);
  return out;
}

EmbedSummary embed_corpus(Corpus& corpus, const EmbeddingStore& store) {
  EmbedSummary summary;
  for (auto& doc : corpus) {
    for (std::size_t i = 0; i < doc.sentences.size(); ++i) {
      auto& s = doc.sentences[i];
      std::vector<std::string> tokens = s.tokens.empty() ? tokenize(s.text) : s.tokens;
      ++summary.sentences;
      summary.total_tokens += tokens.size();
      if (tokens.empty() && store.provider() != EmbeddingProvider::precomputed_sentence) {
        s.embedding = std::vector<double>(store.dim(), 0.0);
        ++summary.zero_vector_sentences;
        continue;
      }
      auto e = embed_sentence(tokens, store, sentence_key(doc.id, i));
      summary.oov_tokens += e.oov_tokens;
      if (e.all_oov) ++summary.zero_vector_sentences;
      s.embedding = std::move(e.vector);
    }
  }
  return summary;
}

}  // namespace milsent
