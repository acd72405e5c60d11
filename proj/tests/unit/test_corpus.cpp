#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "milsent/corpus.hpp"
#include "milsent/error.hpp"
#include "milsent/random.hpp"
#include "support/helpers.hpp"

using namespace milsent;

namespace {

Document make_doc(const std::string& id, int day) {
  Document d;
  d.id = id;
  d.ticker = "ACME";
  d.published_at = Date{std::chrono::year{2021}, std::chrono::March, std::chrono::day{static_cast<unsigned>(day)}};
  d.raw_text = "Revenue increased. Costs fell.";
  return d;
}

}  // namespace

TEST_CASE("read_corpus keeps record order") {
  std::istringstream in(
      R"({"id":"a","ticker":"X","published_at":"2020-01-02","text":"one"})"
      "\n"
      R"({"id":"b","ticker":"Y","published_at":"2020-01-03","text":"two"})"
      "\n");
  const auto corpus = read_corpus(in);
  REQUIRE(corpus.size() == 2);
  CHECK(corpus[0].id == "a");
  CHECK(corpus[1].id == "b");
  CHECK(corpus[1].raw_text == "two");
}

TEST_CASE("empty input gives an empty corpus") {
  std::istringstream in("");
  CHECK(read_corpus(in).empty());
  std::istringstream blank("\n\n");
  CHECK(read_corpus(blank).empty());
}

TEST_CASE("missing id names the line") {
  std::istringstream in(
      R"({"id":"a","ticker":"X","published_at":"2020-01-02","text":"one"})"
      "\n"
      R"({"ticker":"X","published_at":"2020-01-02","text":"two"})"
      "\n");
  try {
    read_corpus(in, "news.jsonl");
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("news.jsonl:2") != std::string::npos);
    CHECK(std::string(e.what()).find("id") != std::string::npos);
  }
}

TEST_CASE("schema violations are rejected") {
  auto bad = [](const std::string& line) {
    std::istringstream in(line + "\n");
    CHECK_THROWS_AS(read_corpus(in), DataError);
  };
  bad(R"({"id":"a","ticker":"X","published_at":"2020-13-02","text":"t"})");
  bad(R"({"id":"a","ticker":"X","published_at":"2020-01-02","text":"t","label":"pos","abnormal_return":-0.1})");
  bad(R"({"id":"a","ticker":"X","published_at":"2020-01-02","text":"t","label":"maybe"})");
  bad(R"({"id":"a","ticker":"X","published_at":"2020-01-02","text":"t","sentences":[{"text":"s","pred":"pos","score":0.2}]})");
  bad(R"({"id":"a","ticker":"X","published_at":"2020-01-02","text":"t"})"
      "\n"
      R"({"id":"a","ticker":"X","published_at":"2020-01-02","text":"t"})");
  bad("not json");
}

TEST_CASE("round trip reproduces every field bit-exactly") {
  Rng rng(11);
  Corpus corpus;
  for (int i = 0; i < 20; ++i) {
    Document d = make_doc("doc-" + std::to_string(i), 1 + i);
    const double ar = rng.uniform(-0.2, 0.2);
    d.abnormal_return = ar;
    d.label = ar > 0 ? Polarity::positive : Polarity::negative;
    for (int s = 0; s < 3; ++s) {
      SentenceInstance inst;
      inst.text = "sentence \"" + std::to_string(s) + "\" \xC3\xA9";
      inst.tokens = {"sentence", "<num_pos>"};
      std::vector<double> v(4);
      for (auto& x : v) x = rng.normal() * 1e-3 + std::ldexp(1.0, -40);
      inst.embedding = v;
      const double score = rng.uniform();
      inst.score = score;
      inst.predicted_label = score >= 0.5 ? Prediction::positive : Prediction::negative;
      if (s == 1) inst.gold_label = Polarity::negative;
      d.sentences.push_back(inst);
    }
    if (i % 3 == 0) d.predicted_label = Prediction::neutral;
    corpus.push_back(d);
  }
  std::stringstream buf;
  write_corpus(buf, corpus);
  const auto back = read_corpus(buf);
  CHECK(back == corpus);
}

TEST_CASE("to_mil_dataset: one labeled document with three sentences") {
  Document d = make_doc("a", 1);
  d.label = Polarity::positive;
  for (int i = 0; i < 3; ++i) {
    SentenceInstance s;
    s.text = "x";
    s.embedding = std::vector<double>{1.0 * i, 2.0};
    d.sentences.push_back(s);
  }
  const auto data = to_mil_dataset(std::vector<Document>{d});
  REQUIRE(data.groups.size() == 1);
  CHECK(data.groups[0].instances.rows() == 3);
  CHECK(data.groups[0].label == 1);
  CHECK(data.dim == 2);
  CHECK(data.groups[0].instances.row(2)[0] == 2.0);
}

TEST_CASE("to_mil_dataset: missing embedding names the document") {
  Document d = make_doc("needs-vector", 1);
  d.label = Polarity::negative;
  SentenceInstance a;
  a.embedding = std::vector<double>{1.0};
  d.sentences = {a, SentenceInstance{}};
  try {
    to_mil_dataset(std::vector<Document>{d});
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("needs-vector") != std::string::npos);
  }
}

TEST_CASE("to_mil_dataset: dimension mismatch across documents") {
  Document a = make_doc("a", 1), b = make_doc("b", 2);
  a.label = b.label = Polarity::positive;
  SentenceInstance s300, s200;
  s300.embedding = std::vector<double>(300, 0.1);
  s200.embedding = std::vector<double>(200, 0.1);
  a.sentences = {s300};
  b.sentences = {s200};
  CHECK_THROWS_AS(to_mil_dataset(std::vector<Document>{a, b}), DataError);
}

TEST_CASE("to_mil_dataset preserves the instance count") {
  Rng rng(5);
  for (int trial = 0; trial < 25; ++trial) {
    Corpus corpus;
    std::size_t expected = 0;
    const std::size_t docs = 1 + rng.below(8);
    for (std::size_t k = 0; k < docs; ++k) {
      Document d = make_doc("d" + std::to_string(k), 1 + static_cast<int>(k));
      d.label = rng.below(2) ? Polarity::positive : Polarity::negative;
      const std::size_t n = 1 + rng.below(6);
      expected += n;
      for (std::size_t i = 0; i < n; ++i) {
        SentenceInstance s;
        s.embedding = std::vector<double>{rng.normal(), rng.normal(), rng.normal()};
        d.sentences.push_back(s);
      }
      corpus.push_back(d);
    }
    const auto data = to_mil_dataset(corpus);
    CHECK(data.instance_count() == expected);
    CHECK(data.groups.size() == docs);
  }
}

TEST_CASE("dates parse and format") {
  const Date d = parse_date("2005-05-12");
  CHECK(format_date(d) == "2005-05-12");
  CHECK_THROWS_AS(parse_date("2005-02-30"), DataError);
  CHECK_THROWS_AS(parse_date("12.05.2005"), DataError);
}
