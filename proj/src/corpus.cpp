#include "milsent/corpus.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "milsent/error.hpp"

namespace milsent {

using nlohmann::json;

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

int parse_fixed_int(std::string_view s) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw DataError("invalid date component '" + std::string(s) + "'");
  }
  return value;
}

const json& require(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw DataError(std::string("missing required field '") + key + "'");
  return *it;
}

std::string require_string(const json& obj, const char* key) {
  const json& v = require(obj, key);
  if (!v.is_string()) throw DataError(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

double require_finite(const json& v, const char* what) {
  if (!v.is_number()) throw DataError(std::string(what) + " must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw DataError(std::string(what) + " must be finite");
  return d;
}

SentenceInstance parse_sentence(const json& j) {
  SentenceInstance s;
  if (j.is_string()) {
    s.text = j.get<std::string>();
    return s;
  }
  if (!j.is_object()) throw DataError("sentence must be a string or an object");
  s.text = require_string(j, "text");
  if (auto it = j.find("tokens"); it != j.end()) {
    if (!it->is_array()) throw DataError("sentence 'tokens' must be an array");
    for (const auto& t : *it) {
      if (!t.is_string()) throw DataError("sentence tokens must be strings");
      s.tokens.push_back(t.get<std::string>());
    }
  }
  if (auto it = j.find("embedding"); it != j.end()) {
    if (!it->is_array()) throw DataError("sentence 'embedding' must be an array");
    std::vector<double> v;
    v.reserve(it->size());
    for (const auto& x : *it) v.push_back(require_finite(x, "embedding component"));
    s.embedding = std::move(v);
  }
  if (auto it = j.find("pred"); it != j.end()) {
    auto p = it->is_string() ? parse_prediction(it->get<std::string>()) : std::nullopt;
    if (!p) throw DataError("sentence 'pred' must be \"pos\", \"neg\" or \"neutral\"");
    s.predicted_label = p;
  }
  if (auto it = j.find("score"); it != j.end()) {
    const double score = require_finite(*it, "sentence score");
    if (score < 0.0 || score > 1.0) throw DataError("sentence score outside [0,1]");
    s.score = score;
  }
  if (auto it = j.find("gold"); it != j.end()) {
    auto p = it->is_string() ? parse_polarity(it->get<std::string>()) : std::nullopt;
    if (!p) throw DataError("sentence 'gold' must be \"pos\" or \"neg\"");
    s.gold_label = p;
  }
  if (s.score) {
    if (!s.predicted_label) throw DataError("sentence has a score but no 'pred'");
    const auto expected = *s.score >= 0.5 ? Prediction::positive : Prediction::negative;
    if (*s.predicted_label != expected) throw DataError("sentence 'pred' disagrees with its score");
  }
  return s;
}

json sentence_to_json(const SentenceInstance& s) {
  const bool plain = s.tokens.empty() && !s.embedding && !s.predicted_label && !s.score &&
                     !s.gold_label;
  if (plain) return s.text;
  json j = json::object();
  j["text"] = s.text;
  if (!s.tokens.empty()) j["tokens"] = s.tokens;
  if (s.embedding) j["embedding"] = *s.embedding;
  if (s.predicted_label) j["pred"] = std::string(to_string(*s.predicted_label));
  if (s.score) j["score"] = *s.score;
  if (s.gold_label) j["gold"] = std::string(to_string(*s.gold_label));
  return j;
}

}  // namespace

Date parse_date(std::string_view iso) {
  if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-') {
    throw DataError("date '" + std::string(iso) + "' is not YYYY-MM-DD");
  }
  for (std::size_t i : {0, 1, 2, 3, 5, 6, 8, 9}) {
    if (!is_digit(iso[i])) throw DataError("date '" + std::string(iso) + "' is not YYYY-MM-DD");
  }
  Date d{std::chrono::year{parse_fixed_int(iso.substr(0, 4))},
         std::chrono::month{static_cast<unsigned>(parse_fixed_int(iso.substr(5, 2)))},
         std::chrono::day{static_cast<unsigned>(parse_fixed_int(iso.substr(8, 2)))}};
  if (!d.ok()) throw DataError("date '" + std::string(iso) + "' does not exist");
  return d;
}

std::string format_date(Date date) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(date.year()),
                static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
  return buf;
}

std::string_view to_string(Polarity p) { return p == Polarity::positive ? "pos" : "neg"; }

std::string_view to_string(Prediction p) {
  switch (p) {
    case Prediction::positive: return "pos";
    case Prediction::negative: return "neg";
    case Prediction::neutral: return "neutral";
  }
  return "neutral";
}

std::optional<Polarity> parse_polarity(std::string_view s) {
  if (s == "pos") return Polarity::positive;
  if (s == "neg") return Polarity::negative;
  return std::nullopt;
}

std::optional<Prediction> parse_prediction(std::string_view s) {
  if (s == "pos") return Prediction::positive;
  if (s == "neg") return Prediction::negative;
  if (s == "neutral") return Prediction::neutral;
  return std::nullopt;
}

void InstanceMatrix::append_row(std::span<const double> values) {
  if (rows_ == 0 && cols_ == 0) cols_ = values.size();
  if (values.size() != cols_) throw DataError("instance row has the wrong dimension");
  values_.insert(values_.end(), values.begin(), values.end());
  ++rows_;
}

std::size_t MilDataset::instance_count() const {
  std::size_t n = 0;
  for (const auto& g : groups) n += g.instances.rows();
  return n;
}

Document parse_document(std::string_view json_line) {
  json j;
  try {
    j = json::parse(json_line);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw DataError("record must be a JSON object");

  Document doc;
  doc.id = require_string(j, "id");
  if (doc.id.empty()) throw DataError("field 'id' must not be empty");
  doc.ticker = require_string(j, "ticker");
  doc.published_at = parse_date(require_string(j, "published_at"));
  doc.raw_text = require_string(j, "text");

  if (auto it = j.find("sentences"); it != j.end()) {
    if (!it->is_array()) throw DataError("field 'sentences' must be an array");
    for (const auto& s : *it) doc.sentences.push_back(parse_sentence(s));
  }
  if (auto it = j.find("label"); it != j.end()) {
    auto p = it->is_string() ? parse_polarity(it->get<std::string>()) : std::nullopt;
    if (!p) throw DataError("field 'label' must be \"pos\" or \"neg\"");
    doc.label = p;
  }
  if (auto it = j.find("abnormal_return"); it != j.end()) {
    doc.abnormal_return = require_finite(*it, "field 'abnormal_return'");
  }
  if (auto it = j.find("pred"); it != j.end()) {
    auto p = it->is_string() ? parse_prediction(it->get<std::string>()) : std::nullopt;
    if (!p) throw DataError("field 'pred' must be \"pos\", \"neg\" or \"neutral\"");
    doc.predicted_label = p;
  }
  if (doc.label && doc.abnormal_return) {
    const bool positive = *doc.abnormal_return > 0.0;
    if (positive != (*doc.label == Polarity::positive)) {
      throw DataError("label disagrees with the sign of abnormal_return");
    }
  }
  return doc;
}

std::string serialize_document(const Document& doc) {
  json j = json::object();
  j["id"] = doc.id;
  j["ticker"] = doc.ticker;
  j["published_at"] = format_date(doc.published_at);
  j["text"] = doc.raw_text;
  if (!doc.sentences.empty()) {
    json arr = json::array();
    for (const auto& s : doc.sentences) arr.push_back(sentence_to_json(s));
    j["sentences"] = std::move(arr);
  }
  if (doc.label) j["label"] = std::string(to_string(*doc.label));
  if (doc.abnormal_return) j["abnormal_return"] = *doc.abnormal_return;
  if (doc.predicted_label) j["pred"] = std::string(to_string(*doc.predicted_label));
  return j.dump();
}

Corpus read_corpus(std::istream& in, std::string_view source) {
  Corpus corpus;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    Document doc;
    try {
      doc = parse_document(line);
    } catch (const DataError& e) {
      std::ostringstream msg;
      msg << source << ":" << line_no << ": " << e.what();
      throw DataError(msg.str());
    }
    if (!seen.insert(doc.id).second) {
      std::ostringstream msg;
      msg << source << ":" << line_no << ": duplicate document id '" << doc.id << "'";
      throw DataError(msg.str());
    }
    corpus.push_back(std::move(doc));
  }
  return corpus;
}

Corpus load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open corpus file '" + path.string() + "'");
  return read_corpus(in, path.string());
}

void write_corpus(std::ostream& out, std::span<const Document> corpus) {
  for (const auto& doc : corpus) out << serialize_document(doc) << '\n';
}

void save_corpus(const std::filesystem::path& path, std::span<const Document> corpus) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write corpus file '" + path.string() + "'");
  write_corpus(out, corpus);
  if (!out) throw DataError("write failed for '" + path.string() + "'");
}

MilDataset to_mil_dataset(std::span<const Document> corpus) {
  MilDataset data;
  bool have_dim = false;
  for (const auto& doc : corpus) {
    if (!doc.label) throw DataError("document '" + doc.id + "' has no label");
    if (doc.sentences.empty()) throw DataError("document '" + doc.id + "' has no sentences");
    MilGroup group;
    group.label = static_cast<int>(*doc.label);
    for (std::size_t i = 0; i < doc.sentences.size(); ++i) {
      const auto& emb = doc.sentences[i].embedding;
      if (!emb) {
        throw DataError("document '" + doc.id + "' sentence " + std::to_string(i) +
                        " has no embedding");
      }
      if (!have_dim) {
        if (emb->empty()) throw DataError("document '" + doc.id + "' has an empty embedding");
        data.dim = emb->size();
        have_dim = true;
      }
      if (emb->size() != data.dim) {
        throw DataError("dimension mismatch in document '" + doc.id + "': expected " +
                        std::to_string(data.dim) + ", got " + std::to_string(emb->size()));
      }
      group.instances.append_row(*emb);
    }
    data.groups.push_back(std::move(group));
  }
  return data;
}

}  // namespace milsent
