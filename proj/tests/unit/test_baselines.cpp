#include <doctest.h>

#include <cmath>
#include <sstream>

#include "milsent/baselines.hpp"
#include "milsent/error.hpp"
#include "milsent/random.hpp"
#include "support/helpers.hpp"

using namespace milsent;

namespace {

PolarityDictionary dict(const std::string& pos, const std::string& neg) {
  std::istringstream p(pos), n(neg);
  return make_dictionary("test", p, n);
}

std::vector<std::string> random_tokens(Rng& rng, std::size_t max_len) {
  static const std::vector<std::string> pool{"gain", "growth", "loss", "decline", "the", "profit", "risk", "a"};
  std::vector<std::string> out;
  for (std::size_t i = rng.below(max_len + 1); i > 0; --i) out.push_back(pool[rng.below(pool.size())]);
  return out;
}

int rank(Prediction p) { return p == Prediction::negative ? 0 : p == Prediction::neutral ? 1 : 2; }

}  // namespace

TEST_CASE("dictionary loading") {
  const auto d = dict("good\n", "bad\n");
  CHECK(d.positive_terms.size() == 1);
  CHECK(d.negative_terms.size() == 1);
  CHECK(dict("good\n", "").negative_terms.empty());
  std::istringstream p("good\nfine\n"), n("fine\n");
  try {
    make_dictionary("x", p, n);
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("fine") != std::string::npos);
  }
}

TEST_CASE("dictionary classification") {
  const auto d = dict("gain\ngrowth\n", "loss\ndecline\n");
  CHECK(dictionary_classify(std::vector<std::string>{"gain", "growth", "loss"}, d) == Prediction::positive);
  CHECK(dictionary_classify(std::vector<std::string>{"the", "a"}, d) == Prediction::neutral);
  CHECK(dictionary_classify(std::vector<std::string>{"gain", "loss"}, d) == Prediction::neutral);
  CHECK(dictionary_classify(std::vector<std::string>{"decline"}, d) == Prediction::negative);
  CHECK(dictionary_classify(std::vector<std::string>{}, d) == Prediction::neutral);
}

TEST_CASE("dictionary classification is order-invariant and monotone") {
  const auto d = dict("gain\ngrowth\nprofit\n", "loss\ndecline\nrisk\n");
  Rng rng(61);
  for (int trial = 0; trial < 500; ++trial) {
    auto tokens = random_tokens(rng, 12);
    const auto label = dictionary_classify(tokens, d);
    auto shuffled = tokens;
    rng.shuffle(std::span(shuffled));
    CHECK(dictionary_classify(shuffled, d) == label);
    tokens.insert(tokens.begin() + static_cast<std::ptrdiff_t>(rng.below(tokens.size() + 1)), "gain");
    CHECK(rank(dictionary_classify(tokens, d)) >= rank(label));
  }
}

TEST_CASE("bag-of-words featurization") {
  const VocabularyIndex index{{"profit", 0}, {"loss", 1}};
  const auto v = bow_featurize(std::vector<std::string>{"profit", "profit", "loss"}, index);
  std::vector<double> dense(2, 0.0);
  for (std::size_t i = 0; i < v.index.size(); ++i) dense[v.index[i]] = v.value[i];
  CHECK(dense == std::vector<double>{2.0, 1.0});
  CHECK(bow_featurize(std::vector<std::string>{}, index).index.empty());
  CHECK(bow_featurize(std::vector<std::string>{"zzz", "yyy"}, index).index.empty());
}

TEST_CASE("bag-of-words counts are additive") {
  const std::vector<std::vector<std::string>> docs{{"gain", "growth", "loss", "decline", "the", "profit", "risk"}};
  const auto index = build_vocabulary_index(docs);
  Rng rng(71);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = random_tokens(rng, 8), b = random_tokens(rng, 8);
    auto ab = a;
    ab.insert(ab.end(), b.begin(), b.end());
    CHECK(bow_featurize(ab, index) == bow_featurize(a, index) + bow_featurize(b, index));
  }
}

TEST_CASE("logistic regression gradient matches finite differences") {
  Rng rng(81);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<SparseVector> x;
    std::vector<int> y;
    for (int i = 0; i < 12; ++i) {
      std::vector<double> dense(6);
      for (auto& v : dense) v = rng.below(3) == 0 ? 0.0 : rng.normal();
      x.push_back(dense_to_sparse(dense));
      y.push_back(static_cast<int>(rng.below(2)));
    }
    auto w = testing_support::random_theta(rng, 6);
    const double b = rng.normal();
    const double l2 = rng.uniform(0.0, 2.0);
    const auto analytic = logreg_gradient(w, b, x, y, l2);
    std::vector<double> numeric(7);
    const double h = 1e-5;
    for (std::size_t i = 0; i < 6; ++i) {
      auto up = w, down = w;
      up[i] += h;
      down[i] -= h;
      numeric[i] = (logreg_objective(up, b, x, y, l2) - logreg_objective(down, b, x, y, l2)) / (2 * h);
    }
    numeric[6] = (logreg_objective(w, b + h, x, y, l2) - logreg_objective(w, b - h, x, y, l2)) / (2 * h);
    CHECK(testing_support::relative_error(analytic, numeric) < 1e-5);
  }
}

TEST_CASE("logistic regression training") {
  const std::vector<SparseVector> x{dense_to_sparse(std::vector<double>{1.0, 0.0}),
                                    dense_to_sparse(std::vector<double>{0.0, 1.0})};
  const std::vector<int> y{1, 0};
  const auto model = train_logreg(x, y, 2, 1e-3, 5);
  CHECK(logreg_predict(model, x[0]).label == Polarity::positive);
  CHECK(logreg_predict(model, x[1]).label == Polarity::negative);

  const auto weak = train_logreg(x, y, 2, 1e-3, 5);
  const auto strong = train_logreg(x, y, 2, 1e6, 5);
  auto norm = [](const LogRegModel& m) {
    double s = 0.0;
    for (double v : m.weights) s += v * v;
    return std::sqrt(s);
  };
  CHECK(norm(strong) < norm(weak));

  std::vector<double> trace;
  train_logreg(x, y, 2, 0.1, 5, {}, &trace);
  REQUIRE(trace.size() > 1);
  for (std::size_t i = 1; i < trace.size(); ++i) CHECK(trace[i] <= trace[i - 1] + 1e-15);

  CHECK_THROWS_AS(train_logreg(x, std::vector<int>{1, 1}, 2, 1.0, 5), DataError);
}

TEST_CASE("bag-of-words prediction") {
  const std::vector<std::vector<std::string>> docs{{"gain", "growth"}, {"gain"}, {"loss"}, {"loss", "decline"}};
  const std::vector<int> labels{1, 1, 0, 0};
  const auto model = train_bow_logreg(docs, labels, 0.01, 3);
  CHECK(bow_predict(model, std::vector<std::string>{"gain"}).label == Polarity::positive);
  CHECK(bow_predict(model, std::vector<std::string>{"loss"}).label == Polarity::negative);

  const auto empty = bow_predict(model, std::vector<std::string>{});
  CHECK((empty.label == Polarity::positive) == (model.classifier.intercept >= 0.0));

  LogRegModel zero;
  zero.weights = {0.0};
  CHECK(logreg_predict(zero, SparseVector{}).score == 0.5);
  CHECK(logreg_predict(zero, SparseVector{}).label == Polarity::positive);

  std::vector<std::string> tokens{"loss"};
  double prev = bow_predict(model, tokens).score;
  for (int i = 0; i < 5; ++i) {
    tokens.push_back("gain");
    const double s = bow_predict(model, tokens).score;
    CHECK(s >= prev);
    prev = s;
  }
}
