#include "milsent/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <ostream>

#include <json.hpp>

#include "milsent/error.hpp"

namespace milsent {

namespace {

std::string percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f %%", 100.0 * v);
  return buf;
}

}  // namespace

std::pair<Corpus, Corpus> temporal_split(std::span<const Document> corpus, double ratio) {
  if (corpus.empty()) throw DataError("cannot split an empty corpus");
  if (!(ratio >= 0.0 && ratio <= 1.0)) throw ConfigError("split ratio must lie in [0, 1]");
  Corpus sorted(corpus.begin(), corpus.end());
  std::stable_sort(sorted.begin(), sorted.end(), [](const Document& a, const Document& b) {
    if (a.published_at != b.published_at) return a.published_at < b.published_at;
    return a.id < b.id;
  });
  const auto n_train = std::min(
      sorted.size(),
      static_cast<std::size_t>(std::ceil(ratio * static_cast<double>(sorted.size()) - 1e-9)));
  Corpus test(std::make_move_iterator(sorted.begin() + static_cast<std::ptrdiff_t>(n_train)),
              std::make_move_iterator(sorted.end()));
  sorted.resize(n_train);
  return {std::move(sorted), std::move(test)};
}

EvalReport score_predictions(std::span<const Prediction> predicted, std::span<const Polarity> gold) {
  if (predicted.size() != gold.size()) {
    throw DataError("prediction/gold length mismatch: " + std::to_string(predicted.size()) + " vs " +
                    std::to_string(gold.size()));
  }
  EvalReport r;
  r.total = predicted.size();
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const bool gold_pos = gold[i] == Polarity::positive;
    switch (predicted[i]) {
      case Prediction::neutral: ++r.neutral; break;
      case Prediction::positive: ++(gold_pos ? r.tp : r.fp); break;
      case Prediction::negative: ++(gold_pos ? r.fn : r.tn); break;
    }
  }
  if (r.total > 0) {
    r.accuracy = static_cast<double>(r.tp + r.tn) / static_cast<double>(r.total);
    r.neutral_rate = static_cast<double>(r.neutral) / static_cast<double>(r.total);
  }
  if (r.tp + r.fn > 0) {
    r.recall = static_cast<double>(r.tp) / static_cast<double>(r.tp + r.fn);
  } else {
    r.recall_undefined = true;
  }
  if (r.tp + r.fp > 0) {
    r.precision = static_cast<double>(r.tp) / static_cast<double>(r.tp + r.fp);
  } else {
    r.precision_undefined = true;
  }
  if (r.precision + r.recall > 0.0) {
    r.f1 = 2.0 * r.precision * r.recall / (r.precision + r.recall);
  } else {
    r.f1_undefined = true;
  }
  return r;
}

double LabelDistribution::row_share(std::size_t reaction, std::size_t sentence_label) const {
  const auto row = counts[reaction][0] + counts[reaction][1];
  return row == 0 ? 0.0 : static_cast<double>(counts[reaction][sentence_label]) / static_cast<double>(row);
}

LabelDistribution label_distribution(std::span<const Document> corpus) {
  LabelDistribution d;
  for (const auto& doc : corpus) {
    if (!doc.label) continue;
    const std::size_t row = *doc.label == Polarity::positive ? 0 : 1;
    std::size_t pos = 0, neg = 0;
    for (const auto& s : doc.sentences) {
      if (!s.predicted_label) continue;
      if (*s.predicted_label == Prediction::positive) ++pos;
      if (*s.predicted_label == Prediction::negative) ++neg;
    }
    if (pos + neg == 0) continue;
    d.counts[row][0] += pos;
    d.counts[row][1] += neg;
    ++d.documents;
    if (pos > 0 && neg > 0) {
      ++d.both;
    } else if (pos > 0) {
      ++d.only_positive;
    } else {
      ++d.only_negative;
    }
  }
  return d;
}

void print_label_distribution(std::ostream& out, const LabelDistribution& d) {
  auto cell = [&](std::size_t r, std::size_t c) {
    return std::to_string(d.counts[r][c]) + " (" + percent(d.row_share(r, c)) + ")";
  };
  out << "                          Sentence label\n";
  out << std::left << std::setw(26) << "Market reaction" << std::setw(22) << "positive" << "negative\n";
  out << std::setw(26) << "positive" << std::setw(22) << cell(0, 0) << cell(0, 1) << '\n';
  out << std::setw(26) << "negative" << std::setw(22) << cell(1, 0) << cell(1, 1) << '\n';
  const double n = d.documents == 0 ? 1.0 : static_cast<double>(d.documents);
  out << "\nDocuments: " << d.documents << '\n';
  out << "  both polarities:   " << d.both << " (" << percent(static_cast<double>(d.both) / n) << ")\n";
  out << "  only positive:     " << d.only_positive << " ("
      << percent(static_cast<double>(d.only_positive) / n) << ")\n";
  out << "  only negative:     " << d.only_negative << " ("
      << percent(static_cast<double>(d.only_negative) / n) << ")\n";
  out << std::right;
}

void print_report_table(std::ostream& out, std::span<const MethodReport> rows, std::string_view title) {
  std::size_t name_width = 6;
  for (const auto& r : rows) name_width = std::max(name_width, r.method.size());
  name_width += 2;
  out << "Evaluation: " << title << '\n';
  out << "(neutral predictions count as errors for accuracy; excluded from recall/precision)\n";
  out << std::left << std::setw(static_cast<int>(name_width)) << "Method" << std::right;
  for (const char* h : {"Accuracy", "Recall", "Precision", "F1-Score", "Neutral"}) {
    out << std::setw(12) << h;
  }
  out << '\n';
  for (const auto& row : rows) {
    const auto& r = row.report;
    out << std::left << std::setw(static_cast<int>(name_width)) << row.method << std::right;
    out << std::setw(12) << percent(r.accuracy) << std::setw(12) << percent(r.recall) << std::setw(12)
        << percent(r.precision) << std::setw(12) << percent(r.f1) << std::setw(12)
        << (row.emits_neutral ? percent(r.neutral_rate) : std::string("-"));
    out << '\n';
  }
}

std::string report_json(std::span<const MethodReport> rows, std::string_view level) {
  nlohmann::json j;
  j["level"] = std::string(level);
  j["neutral_policy"] = "neutral counts as an error for accuracy; excluded from precision/recall";
  j["methods"] = nlohmann::json::array();
  for (const auto& row : rows) {
    const auto& r = row.report;
    j["methods"].push_back({{"method", row.method},
                            {"accuracy", r.accuracy},
                            {"recall", r.recall},
                            {"precision", r.precision},
                            {"f1", r.f1},
                            {"neutral_rate", r.neutral_rate},
                            {"tp", r.tp},
                            {"fp", r.fp},
                            {"tn", r.tn},
                            {"fn", r.fn},
                            {"neutral", r.neutral},
                            {"total", r.total},
                            {"recall_undefined", r.recall_undefined},
                            {"precision_undefined", r.precision_undefined},
                            {"f1_undefined", r.f1_undefined}});
  }
  return j.dump(2);
}

}  // namespace milsent
