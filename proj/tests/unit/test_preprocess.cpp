#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "milsent/error.hpp"
#include "milsent/preprocess.hpp"
#include "milsent/random.hpp"

using namespace milsent;

namespace {

const PreprocessConfig kDefaults{};

std::string random_text(Rng& rng) {
  static const std::vector<std::string> pieces = {
      "Profit", "rose", "12.5%", "-3.2", "EUR", "on", "12 May 2005", "2005-05-12", "http://x.com/a",
      "<b>bold</b>", "&amp;", "approx.", "mio.", "Inc.", "U.S.", "loss", "(+4)", "1,000", "\xE2\x88\x92" "7",
      ".", "!", "?", "\"quoted.\"", "May 2005", "  ", "\n", "ceo@firm.com", "<url>", "<num_pos>", "A."};
  std::string out;
  const std::size_t n = rng.below(25);
  for (std::size_t i = 0; i < n; ++i) {
    out += pieces[rng.below(pieces.size())];
    out += rng.below(4) == 0 ? "" : " ";
  }
  return out;
}

}  // namespace

TEST_CASE("clean_text replaces signed numbers") {
  CHECK(clean_text("Profit rose 12.5%", kDefaults) == "profit rose <num_pos>%");
  CHECK(clean_text("", kDefaults).empty());
}

TEST_CASE("clean_text replaces dates before numbers") {
  CHECK(clean_text("Loss of -3.2 EUR on 12 May 2005", kDefaults) == "loss of <num_neg> eur on <date>");
  CHECK(clean_text("Reported 2005-05-12.", kDefaults) == "reported <date>.");
  CHECK(clean_text("As of May 12, 2005 sales grew", kDefaults) == "as of <date> sales grew");
}

TEST_CASE("clean_text handles urls, markup and entities") {
  CHECK(clean_text("See <a href=\"x\">http://example.com/ir</a> &amp; more", kDefaults) == "see <url> & more");
  CHECK(clean_text("Mail ir@example.com now", kDefaults) == "mail <url> now");
}

TEST_CASE("cutoff patterns truncate boilerplate") {
  PreprocessConfig cfg;
  cfg.cutoff_patterns = {"end of announcement"};
  CHECK(clean_text("Sales up. End of Announcement. Contact: x", cfg) == "sales up.");
}

TEST_CASE("clean_text is idempotent") {
  Rng rng(17);
  for (int i = 0; i < 300; ++i) {
    const std::string t = random_text(rng);
    const std::string once = clean_text(t, kDefaults);
    CHECK_MESSAGE(clean_text(once, kDefaults) == once, "input: " << t);
  }
}

TEST_CASE("split_sentences basic cases") {
  CHECK(split_sentences("a b. c d.") == std::vector<std::string>{"a b.", "c d."});
  CHECK(split_sentences("approx. 5 mio. euros were lost.") ==
        std::vector<std::string>{"approx. 5 mio. euros were lost."});
  CHECK(split_sentences("").empty());
  CHECK(split_sentences("Up 3.5 percent! Really? Yes.").size() == 3);
  CHECK(split_sentences("J. Smith joined. He left.").size() == 2);
  CHECK(split_sentences("no terminal punctuation") == std::vector<std::string>{"no terminal punctuation"});
}

TEST_CASE("split_sentences never yields empty strings") {
  Rng rng(23);
  for (int i = 0; i < 300; ++i) {
    for (const auto& s : split_sentences(random_text(rng))) {
      CHECK_FALSE(s.empty());
      CHECK(s.find_first_not_of(" \t\n\r") != std::string::npos);
    }
  }
}

TEST_CASE("tokenize") {
  CHECK(tokenize("profit rose <num_pos>%") == std::vector<std::string>{"profit", "rose", "<num_pos>"});
  CHECK(tokenize("<date>") == std::vector<std::string>{"<date>"});
  CHECK(tokenize("   ").empty());
  CHECK(tokenize("year-on-year it's") == std::vector<std::string>{"year-on-year", "it's"});
}

TEST_CASE("vocabulary threshold is inclusive") {
  std::vector<std::vector<std::string>> seqs = {{"profit", "profit", "loss"}, {"profit", "loss", "profit"},
                                                {"profit", "loss", "loss"}};
  const auto vocab = build_vocabulary(seqs, 5);
  CHECK(vocab.contains("profit"));  // 5 occurrences
  CHECK_FALSE(vocab.contains("loss"));  // 4 occurrences
  CHECK(vocab.contains("<unk>"));
}

TEST_CASE("empty corpus vocabulary holds only special tokens") {
  const auto vocab = build_vocabulary({}, 5);
  CHECK(vocab.size() > 0);
  for (const auto& [term, count] : vocab.terms()) CHECK(is_special_token(term));
}

TEST_CASE("apply_vocabulary") {
  const auto vocab = build_vocabulary(std::vector<std::vector<std::string>>{{"profit"}}, 1);
  CHECK(apply_vocabulary(std::vector<std::string>{"rare", "profit"}, vocab) ==
        std::vector<std::string>{"<unk>", "profit"});
  CHECK(apply_vocabulary(std::vector<std::string>{"profit", "profit"}, vocab) ==
        std::vector<std::string>{"profit", "profit"});
  CHECK(apply_vocabulary(std::vector<std::string>{}, vocab).empty());
}

TEST_CASE("apply_vocabulary preserves token counts") {
  Rng rng(29);
  std::vector<std::vector<std::string>> seqs;
  for (int i = 0; i < 50; ++i) {
    std::vector<std::string> s;
    for (std::size_t j = rng.below(12); j > 0; --j) s.push_back("w" + std::to_string(rng.below(30)));
    seqs.push_back(s);
  }
  const auto vocab = build_vocabulary(seqs, 3);
  for (const auto& s : seqs) {
    const auto mapped = apply_vocabulary(s, vocab);
    REQUIRE(mapped.size() == s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      CHECK((mapped[i] == s[i] || (mapped[i] == "<unk>" && !vocab.contains(s[i]))));
    }
  }
}

TEST_CASE("empirical_quantile matches linear interpolation by hand") {
  std::vector<double> counts(100);
  for (int i = 0; i < 100; ++i) counts[i] = i + 1;
  // position (n-1)q = 0.99 between 1 and 2; 98.01 between 99 and 100
  CHECK(empirical_quantile(counts, 0.01) == doctest::Approx(1.99).epsilon(1e-12));
  CHECK(empirical_quantile(counts, 0.99) == doctest::Approx(99.01).epsilon(1e-12));
  CHECK(empirical_quantile({5.0}, 0.3) == 5.0);
}

namespace {

Document doc_with(std::size_t sentences, std::size_t words, const std::string& id) {
  Document d;
  d.id = id;
  d.ticker = "T";
  d.published_at = Date{std::chrono::year{2020}, std::chrono::January, std::chrono::day{1}};
  for (std::size_t i = 0; i < words; ++i) d.raw_text += "w ";
  for (std::size_t i = 0; i < sentences; ++i) d.sentences.push_back(SentenceInstance{"s.", {"s"}});
  return d;
}

}  // namespace

TEST_CASE("filter_corpus trims the sentence-count percentile band") {
  Corpus corpus;
  for (std::size_t n = 1; n <= 100; ++n) corpus.push_back(doc_with(n, 60, "d" + std::to_string(n)));
  const auto kept = filter_corpus(corpus, kDefaults);
  REQUIRE(kept.size() == 98);
  CHECK(kept.front().sentences.size() == 2);
  CHECK(kept.back().sentences.size() == 99);
}

TEST_CASE("filter_corpus drops short documents and handles empty input") {
  const Corpus corpus{doc_with(3, 10, "short"), doc_with(3, 80, "long")};
  PreprocessConfig cfg;
  cfg.length_percentile = 0.0;
  const auto kept = filter_corpus(corpus, cfg);
  REQUIRE(kept.size() == 1);
  CHECK(kept[0].id == "long");
  CHECK(filter_corpus(Corpus{}, kDefaults).empty());
}

TEST_CASE("filter_corpus output is a subsequence of its input") {
  Rng rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    Corpus corpus;
    for (std::size_t i = rng.below(40); i > 0; --i) {
      corpus.push_back(doc_with(1 + rng.below(30), 30 + rng.below(50), "d" + std::to_string(corpus.size())));
    }
    const auto kept = filter_corpus(corpus, kDefaults);
    std::size_t pos = 0;
    for (const auto& d : kept) {
      while (pos < corpus.size() && !(corpus[pos] == d)) ++pos;
      CHECK(pos < corpus.size());
      ++pos;
    }
  }
}

TEST_CASE("config validation") {
  PreprocessConfig cfg;
  cfg.length_percentile = 0.6;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  PreprocessConfig bad_regex;
  bad_regex.cutoff_patterns = {"(unclosed"};
  CHECK_THROWS_AS(bad_regex.validate(), ConfigError);
}
