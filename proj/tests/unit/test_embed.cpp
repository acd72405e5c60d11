#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "milsent/embed.hpp"
#include "milsent/error.hpp"
#include "milsent/random.hpp"

using namespace milsent;

namespace {

double norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

EmbeddingStore two_word_store() {
  std::istringstream in("a 1 0\nb 0 1\n");
  return read_word_vectors(in);
}

}  // namespace

TEST_CASE("word-vector file loading") {
  std::istringstream in("profit 0.1 0.2 0.3\nloss -0.1 0.0 0.5\n");
  const auto store = read_word_vectors(in);
  CHECK(store.size() == 2);
  CHECK(store.dim() == 3);
  CHECK(store.provider() == EmbeddingProvider::word_average);

  std::istringstream with_header("2 3\nprofit 0.1 0.2 0.3\nloss -0.1 0.0 0.5\n");
  CHECK(read_word_vectors(with_header).size() == 2);

  std::istringstream ragged("a 1 2 3\nb 1 2 3 4\n");
  CHECK_THROWS_AS(read_word_vectors(ragged), DataError);
  std::istringstream empty("");
  CHECK_THROWS_AS(read_word_vectors(empty), DataError);
}

TEST_CASE("sentence-vector file loading") {
  std::istringstream in("d1:0\t0.5 0.5\nd1:1\t-1 2\n");
  const auto store = read_sentence_vectors(in);
  CHECK(store.dim() == 2);
  CHECK(store.provider() == EmbeddingProvider::precomputed_sentence);
  const std::vector<std::string> tokens{"ignored"};
  CHECK(embed_sentence(tokens, store, sentence_key("d1", 1)).vector == std::vector<double>{-1.0, 2.0});
  CHECK_THROWS_AS(embed_sentence(tokens, store, sentence_key("d1", 7)), DataError);
}

TEST_CASE("word averaging") {
  const auto store = two_word_store();
  CHECK(embed_sentence(std::vector<std::string>{"a", "b"}, store).vector == std::vector<double>{0.5, 0.5});
  CHECK(embed_sentence(std::vector<std::string>{"a"}, store).vector == std::vector<double>{1.0, 0.0});
  const auto oov = embed_sentence(std::vector<std::string>{"x", "y"}, store);
  CHECK(oov.all_oov);
  CHECK(oov.oov_tokens == 2);
  CHECK(oov.vector == std::vector<double>{0.0, 0.0});
  const auto partial = embed_sentence(std::vector<std::string>{"a", "zzz"}, store);
  CHECK(partial.oov_tokens == 1);
  CHECK(partial.vector == std::vector<double>{1.0, 0.0});
}

TEST_CASE("averaging is order-free and norm-bounded") {
  Rng rng(41);
  std::ostringstream file;
  for (int w = 0; w < 20; ++w) {
    file << "w" << w;
    for (int c = 0; c < 5; ++c) file << ' ' << rng.normal();
    file << '\n';
  }
  std::istringstream in(file.str());
  const auto words = read_word_vectors(in);
  const auto hashed = EmbeddingStore::hash_fallback(16, 99);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::string> tokens;
    for (std::size_t i = 1 + rng.below(10); i > 0; --i) tokens.push_back("w" + std::to_string(rng.below(20)));
    auto shuffled = tokens;
    rng.shuffle(std::span(shuffled));
    for (const auto* store : {&words, &hashed}) {
      const auto a = embed_sentence(tokens, *store).vector;
      const auto b = embed_sentence(shuffled, *store).vector;
      for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12));
      double max_norm = 0.0;
      for (const auto& t : tokens) {
        max_norm = std::max(max_norm, norm(embed_sentence(std::vector<std::string>{t}, *store).vector));
      }
      CHECK(norm(a) <= max_norm + 1e-12);
    }
  }
}

TEST_CASE("hash fallback is reproducible and seed dependent") {
  const auto a = hash_token_vector("profit", 8, 1);
  CHECK(a == hash_token_vector("profit", 8, 1));
  CHECK(a != hash_token_vector("profit", 8, 2));
  CHECK(a != hash_token_vector("loss", 8, 1));
  CHECK(norm(a) == doctest::Approx(1.0).epsilon(1e-12));
  // Frozen from an independent FNV-1a / SplitMix64 computation outside the library.
  const auto frozen = hash_token_vector("profit", 4, 0);
  const std::vector<double> expected{0.06035616093912233, -0.8876626286580482, -0.10504517255263529,
                                     0.44427210495816827};
  REQUIRE(frozen.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) CHECK(frozen[i] == doctest::Approx(expected[i]).epsilon(1e-15));
}

TEST_CASE("embed_corpus fills every sentence") {
  Corpus corpus(1);
  corpus[0].id = "d";
  corpus[0].sentences = {SentenceInstance{"a b", {"a", "b"}}, SentenceInstance{"", {}}, SentenceInstance{"q", {"q"}}};
  const auto summary = embed_corpus(corpus, two_word_store());
  CHECK(summary.sentences == 3);
  CHECK(summary.zero_vector_sentences == 2);
  for (const auto& s : corpus[0].sentences) CHECK(s.embedding.has_value());
  CHECK(*corpus[0].sentences[0].embedding == std::vector<double>{0.5, 0.5});
}
