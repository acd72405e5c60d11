#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "milsent/error.hpp"
#include "milsent/eval.hpp"
#include "milsent/random.hpp"

using namespace milsent;
using namespace std::chrono;

namespace {

Document dated(const std::string& id, int offset) {
  Document d;
  d.id = id;
  d.ticker = "T";
  d.published_at = Date{sys_days{year{2020} / January / 1} + days{offset}};
  return d;
}

std::vector<Prediction> preds(const std::string& s) {
  std::vector<Prediction> out;
  for (char c : s) out.push_back(c == 'p' ? Prediction::positive : c == 'n' ? Prediction::negative : Prediction::neutral);
  return out;
}

std::vector<Polarity> golds(const std::string& s) {
  std::vector<Polarity> out;
  for (char c : s) out.push_back(c == 'p' ? Polarity::positive : Polarity::negative);
  return out;
}

}  // namespace

TEST_CASE("temporal split") {
  Corpus corpus;
  for (int d = 10; d >= 1; --d) corpus.push_back(dated("d" + std::to_string(d), d));
  const auto [train, test] = temporal_split(corpus, 0.8);
  REQUIRE(train.size() == 8);
  REQUIRE(test.size() == 2);
  CHECK(train.front().id == "d1");
  CHECK(train.back().id == "d8");
  CHECK(test.front().id == "d9");
  CHECK(temporal_split(corpus, 1.0).second.empty());

  const Corpus same_day{dated("b", 1), dated("a", 1)};
  const auto [t1, t2] = temporal_split(same_day, 0.5);
  CHECK(t1[0].id == "a");
  CHECK(t2[0].id == "b");
  CHECK_THROWS_AS(temporal_split(Corpus{}, 0.8), DataError);
}

TEST_CASE("temporal split partitions the corpus") {
  Rng rng(91);
  for (int trial = 0; trial < 50; ++trial) {
    Corpus corpus;
    for (std::size_t i = 1 + rng.below(30); i > 0; --i) {
      corpus.push_back(dated("id" + std::to_string(corpus.size()), static_cast<int>(rng.below(15))));
    }
    const double ratio = rng.uniform();
    const auto [train, test] = temporal_split(corpus, ratio);
    CHECK(train.size() + test.size() == corpus.size());
    std::multiset<std::string> ids;
    for (const auto& d : train) ids.insert(d.id);
    for (const auto& d : test) ids.insert(d.id);
    std::multiset<std::string> expected;
    for (const auto& d : corpus) expected.insert(d.id);
    CHECK(ids == expected);
    if (!train.empty() && !test.empty()) {
      Date max_train = train[0].published_at, min_test = test[0].published_at;
      for (const auto& d : train) max_train = std::max(max_train, d.published_at);
      for (const auto& d : test) min_test = std::min(min_test, d.published_at);
      CHECK(max_train <= min_test);
    }
  }
}

TEST_CASE("score_predictions examples") {
  const auto perfect = score_predictions(preds("ppnn"), golds("ppnn"));
  CHECK(perfect.accuracy == 1.0);
  CHECK(perfect.f1 == 1.0);
  CHECK(perfect.neutral == 0);

  const auto neutral = score_predictions(preds("zzz"), golds("pnp"));
  CHECK(neutral.accuracy == 0.0);
  CHECK(neutral.neutral_rate == 1.0);
  CHECK(neutral.recall_undefined);
  CHECK(neutral.precision_undefined);

  // tp=3 fp=1 fn=2 tn=4
  const auto r = score_predictions(preds("pppp" "nn" "nnnn"), golds("pppn" "pp" "nnnn"));
  CHECK(r.tp == 3);
  CHECK(r.fp == 1);
  CHECK(r.fn == 2);
  CHECK(r.tn == 4);
  CHECK(r.precision == 0.75);
  CHECK(r.recall == 0.6);
  CHECK(r.f1 == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(r.accuracy == 0.7);
}

TEST_CASE("score_predictions invariants") {
  Rng rng(93);
  const std::string kinds = "pnz";
  for (int trial = 0; trial < 200; ++trial) {
    std::string p, g;
    for (std::size_t i = 1 + rng.below(20); i > 0; --i) {
      p += kinds[rng.below(3)];
      g += kinds[rng.below(2)];
    }
    const auto a = score_predictions(preds(p), golds(g));
    std::vector<std::size_t> perm(p.size());
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(std::span(perm));
    std::string pp, gg;
    for (auto i : perm) {
      pp += p[i];
      gg += g[i];
    }
    const auto b = score_predictions(preds(pp), golds(gg));
    CHECK(a.accuracy == b.accuracy);
    CHECK(a.f1 == b.f1);
    CHECK(a.tp == b.tp);
    CHECK(a.neutral == b.neutral);
    const double classified = static_cast<double>(a.tp + a.fp + a.tn + a.fn) / static_cast<double>(a.total);
    CHECK(a.neutral_rate + classified == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(a.accuracy == static_cast<double>(a.tp + a.tn) / static_cast<double>(a.total));
    for (double m : {a.accuracy, a.recall, a.precision, a.f1, a.neutral_rate}) {
      CHECK(m >= 0.0);
      CHECK(m <= 1.0);
    }
  }
  CHECK_THROWS_AS(score_predictions(preds("pp"), golds("p")), DataError);
}

TEST_CASE("label distribution") {
  Document d = dated("x", 1);
  d.label = Polarity::positive;
  for (auto p : {Prediction::positive, Prediction::positive, Prediction::negative}) {
    SentenceInstance s;
    s.predicted_label = p;
    d.sentences.push_back(s);
  }
  const auto dist = label_distribution(Corpus{d});
  CHECK(dist.counts[0][0] == 2);
  CHECK(dist.counts[0][1] == 1);
  CHECK(dist.row_share(0, 0) == doctest::Approx(2.0 / 3.0));
  CHECK(dist.both == 1);
  std::ostringstream out;
  print_label_distribution(out, dist);
  CHECK(out.str().find("66.67") != std::string::npos);
  CHECK(out.str().find("33.33") != std::string::npos);
}

TEST_CASE("report table") {
  std::vector<MethodReport> rows{{"MIL", score_predictions(preds("ppnn"), golds("ppnn")), false},
                                 {"Dictionary", score_predictions(preds("pznn"), golds("ppnn")), true}};
  std::ostringstream out;
  print_report_table(out, rows, "Sentence-Level");
  const std::string text = out.str();
  CHECK(text.find("MIL") != std::string::npos);
  CHECK(text.find("Dictionary") != std::string::npos);
  CHECK(text.find("100.00 %") != std::string::npos);
  CHECK(text.find("25.00 %") != std::string::npos);
  const std::string json = report_json(rows, "sentence");
  CHECK(json.find("\"method\": \"MIL\"") != std::string::npos);
}
