#include "milsent/preprocess.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <regex>
#include <unordered_set>

#include "milsent/error.hpp"

namespace milsent {

namespace {

constexpr std::array<std::string_view, 5> kSpecialTokens = {kUnkToken, kNumPosToken, kNumNegToken,
                                                            kDateToken, kUrlToken};

// Plain literal: default_date_patterns() can run during static initialization.
constexpr const char* kMonth =
    "(?:jan(?:uary)?|feb(?:ruary)?|mar(?:ch)?|apr(?:il)?|may|june?|july?|aug(?:ust)?|"
    "sep(?:t(?:ember)?)?|oct(?:ober)?|nov(?:ember)?|dec(?:ember)?)";

// Tags that are not one of our placeholder tokens.
const std::regex& html_tag() {
  static const std::regex re(R"(<(?!(?:unk|num_pos|num_neg|date|url)>)/?[a-zA-Z!][^<>]*>)");
  return re;
}
const std::regex& html_entity() {
  static const std::regex re(R"(&(?:[a-zA-Z]+|#[0-9]+);)");
  return re;
}

std::regex compile(const std::string& pattern) {
  try {
    return std::regex(pattern, std::regex::ECMAScript | std::regex::icase);
  } catch (const std::regex_error& e) {
    throw ConfigError("invalid regular expression '" + pattern + "': " + e.what());
  }
}

char ascii_lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

bool is_word_char(char c) {
  const auto u = static_cast<unsigned char>(c);
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || u >= 0x80;
}

std::string collapse_whitespace(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (char c : s) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

std::string decode_entity(std::string_view entity) {
  if (entity == "&amp;") return "&";
  if (entity == "&quot;") return "\"";
  if (entity == "&apos;" || entity == "&#39;") return "'";
  return " ";
}

// Abbreviations that do not end a sentence when followed by a period.
const std::unordered_set<std::string_view> kAbbreviations = {
    "approx", "mio",  "mn",   "bn",   "mrd",   "bln",  "mr",   "mrs",  "ms",  "dr",
    "prof",   "inc",  "ltd",  "co",   "corp",  "no",   "nr",   "nos",  "vs",  "ca",
    "cf",     "jan",  "feb",  "mar",  "apr",   "jun",  "jul",  "aug",  "sep", "sept",
    "oct",    "nov",  "dec",  "st",   "jr",    "sr",   "dept", "est",  "fig", "incl",
    "excl",   "resp", "tel",  "fax",  "vol",   "pp",   "art",  "sec",  "ref", "intl",
    "govt",   "op",   "abs",  "para", "av",    "ave",  "bros", "gen",  "gov"};

bool is_abbreviation(std::string_view word) {
  while (!word.empty() && (word.front() == '(' || word.front() == '"' || word.front() == '\'')) {
    word.remove_prefix(1);
  }
  if (word.empty()) return false;
  // Capital initials ("J. Smith"); a lone lowercase letter may end a sentence.
  if (word.size() == 1 && std::isupper(static_cast<unsigned char>(word[0]))) return true;
  // Dotted forms such as "e.g" or "u.s".
  if (word.find('.') != std::string_view::npos) return true;
  std::string lower(word);
  std::transform(lower.begin(), lower.end(), lower.begin(), ascii_lower);
  return kAbbreviations.contains(lower);
}

bool is_closer(char c) { return c == '"' || c == '\'' || c == ')' || c == ']'; }

}  // namespace

bool is_special_token(std::string_view token) {
  return std::find(kSpecialTokens.begin(), kSpecialTokens.end(), token) != kSpecialTokens.end();
}

std::vector<std::string> PreprocessConfig::default_date_patterns() {
  return {
      R"(\b\d{4}-\d{1,2}-\d{1,2}\b)",
      R"(\b\d{1,2}[./]\d{1,2}[./]\d{2,4}\b)",
      std::string(R"(\b\d{1,2}(?:st|nd|rd|th)?\.?\s+)") + kMonth + R"(\.?,?\s+\d{4}\b)",
      std::string(R"(\b)") + kMonth + R"(\.?\s+\d{1,2}(?:st|nd|rd|th)?,?\s+\d{4}\b)",
      std::string(R"(\b)") + kMonth + R"(\.?\s+\d{4}\b)",
  };
}

std::vector<std::string> PreprocessConfig::default_url_patterns() {
  return {
      R"((?:https?|ftp)://[^\s<>"]*[^\s<>".,;:!?)])",
      R"(www\.[^\s<>"]*[^\s<>".,;:!?)])",
      R"(\b[a-z0-9._%+-]+@[a-z0-9-]+(?:\.[a-z0-9-]+)+\b)",
  };
}

std::string PreprocessConfig::default_number_pattern() {
  return "(^|[\\s(\\[/:;=~-])((?:[-+]|\xE2\x88\x92)?)(\\d+(?:[.,]\\d+)*)";
}

void PreprocessConfig::validate() const {
  if (!(length_percentile >= 0.0 && length_percentile < 0.5)) {
    throw ConfigError("length_percentile must lie in [0, 0.5)");
  }
  if (min_count < 1) throw ConfigError("min_count must be at least 1");
  for (const auto& p : cutoff_patterns) compile(p);
  for (const auto& p : date_patterns) compile(p);
  for (const auto& p : url_patterns) compile(p);
  if (compile(number_pattern).mark_count() < 3) {
    throw ConfigError("number_pattern needs three capture groups (prefix, sign, magnitude)");
  }
}

struct TextCleaner::Patterns {
  std::vector<std::regex> cutoff;
  std::vector<std::regex> dates;
  std::vector<std::regex> urls;
  std::regex number;
};

TextCleaner::TextCleaner(const PreprocessConfig& config) : patterns_(std::make_unique<Patterns>()) {
  for (const auto& p : config.cutoff_patterns) patterns_->cutoff.push_back(compile(p));
  for (const auto& p : config.date_patterns) patterns_->dates.push_back(compile(p));
  for (const auto& p : config.url_patterns) patterns_->urls.push_back(compile(p));
  patterns_->number = compile(config.number_pattern);
  if (patterns_->number.mark_count() < 3) {
    throw ConfigError("number_pattern needs three capture groups (prefix, sign, magnitude)");
  }
}

TextCleaner::~TextCleaner() = default;
TextCleaner::TextCleaner(TextCleaner&&) noexcept = default;
TextCleaner& TextCleaner::operator=(TextCleaner&&) noexcept = default;

std::string TextCleaner::clean(std::string_view text) const {
  std::string s(text);

  std::size_t cut = s.size();
  for (const auto& re : patterns_->cutoff) {
    std::smatch m;
    if (std::regex_search(s, m, re)) cut = std::min(cut, static_cast<std::size_t>(m.position(0)));
  }
  s.resize(cut);

  s = std::regex_replace(s, html_tag(), " ");
  {
    std::string out;
    auto last = s.cbegin();
    for (std::sregex_iterator it(s.begin(), s.end(), html_entity()), end; it != end; ++it) {
      out.append(last, (*it)[0].first);
      out += decode_entity((*it)[0].str());
      last = (*it)[0].second;
    }
    out.append(last, s.cend());
    s = std::move(out);
  }

  const std::string url(kUrlToken);
  for (const auto& re : patterns_->urls) s = std::regex_replace(s, re, url);
  const std::string date(kDateToken);
  for (const auto& re : patterns_->dates) s = std::regex_replace(s, re, date);

  {
    std::string out;
    auto last = s.cbegin();
    for (std::sregex_iterator it(s.begin(), s.end(), patterns_->number), end; it != end; ++it) {
      const auto& m = *it;
      out.append(last, m[0].first);
      out += m[1].str();
      const bool negative = m[2].matched && m[2].length() > 0 && m[2].str() != "+";
      out += negative ? kNumNegToken : kNumPosToken;
      last = m[0].second;
    }
    out.append(last, s.cend());
    s = std::move(out);
  }

  std::transform(s.begin(), s.end(), s.begin(), ascii_lower);
  return collapse_whitespace(s);
}

std::string clean_text(std::string_view text, const PreprocessConfig& config) {
  return TextCleaner(config).clean(text);
}

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> sentences;
  auto emit = [&](std::size_t begin, std::size_t end) {
    while (begin < end && is_space(text[begin])) ++begin;
    while (end > begin && is_space(text[end - 1])) --end;
    if (end > begin) sentences.emplace_back(text.substr(begin, end - begin));
  };

  std::size_t start = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c != '.' && c != '!' && c != '?') {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && (text[j] == '.' || text[j] == '!' || text[j] == '?')) ++j;
    const bool single_period = (j - i == 1) && c == '.';
    while (j < text.size() && is_closer(text[j])) ++j;
    if (j < text.size() && !is_space(text[j])) {
      // Inside a number, URL or dotted abbreviation.
      i = j;
      continue;
    }
    if (single_period) {
      std::size_t w = i;
      while (w > start && !is_space(text[w - 1])) --w;
      if (is_abbreviation(text.substr(w, i - w))) {
        i = j;
        continue;
      }
    }
    emit(start, j);
    start = j;
    i = j;
  }
  emit(start, text.size());
  return sentences;
}

std::vector<std::string> tokenize(std::string_view sentence) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) tokens.push_back(std::move(current));
    current.clear();
  };

  std::size_t i = 0;
  while (i < sentence.size()) {
    const char c = sentence[i];
    if (c == '<') {
      bool matched = false;
      for (auto special : kSpecialTokens) {
        if (sentence.substr(i, special.size()) == special) {
          flush();
          tokens.emplace_back(special);
          i += special.size();
          matched = true;
          break;
        }
      }
      if (matched) continue;
    }
    if (is_word_char(c)) {
      current.push_back(ascii_lower(c));
    } else if ((c == '\'' || c == '-') && !current.empty() && i + 1 < sentence.size() &&
               is_word_char(sentence[i + 1])) {
      current.push_back(c);
    } else {
      flush();
    }
    ++i;
  }
  flush();
  return tokens;
}

Vocabulary::Vocabulary(std::map<std::string, std::size_t, std::less<>> counts, std::size_t min_count)
    : counts_(std::move(counts)), min_count_(min_count) {}

bool Vocabulary::contains(std::string_view term) const { return counts_.find(term) != counts_.end(); }

std::size_t Vocabulary::count(std::string_view term) const {
  auto it = counts_.find(term);
  return it == counts_.end() ? 0 : it->second;
}

Vocabulary build_vocabulary(std::span<const std::vector<std::string>> token_sequences,
                            std::size_t min_count) {
  if (min_count < 1) throw ConfigError("min_count must be at least 1");
  std::map<std::string, std::size_t, std::less<>> all;
  for (const auto& seq : token_sequences) {
    for (const auto& t : seq) ++all[t];
  }
  std::map<std::string, std::size_t, std::less<>> kept;
  for (auto& [term, n] : all) {
    if (n >= min_count || is_special_token(term)) kept.emplace(term, n);
  }
  for (auto special : kSpecialTokens) kept.try_emplace(std::string(special), 0);
  return Vocabulary(std::move(kept), min_count);
}

std::vector<std::string> apply_vocabulary(std::span<const std::string> tokens,
                                          const Vocabulary& vocab) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(vocab.contains(t) ? t : std::string(kUnkToken));
  return out;
}

std::size_t document_word_count(const Document& doc) {
  auto count_words = [](std::string_view s) {
    std::size_t n = 0;
    bool in_word = false;
    for (char c : s) {
      if (is_space(c)) {
        in_word = false;
      } else if (!in_word) {
        in_word = true;
        ++n;
      }
    }
    return n;
  };
  if (!doc.raw_text.empty()) return count_words(doc.raw_text);
  std::size_t n = 0;
  for (const auto& s : doc.sentences) n += count_words(s.text);
  return n;
}

double empirical_quantile(std::vector<double> sample, double q) {
  if (sample.empty()) throw DataError("quantile of an empty sample");
  std::sort(sample.begin(), sample.end());
  const double h = static_cast<double>(sample.size() - 1) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sample.size()) return sample.back();
  return sample[lo] + (h - static_cast<double>(lo)) * (sample[lo + 1] - sample[lo]);
}

Corpus filter_corpus(std::span<const Document> corpus, const PreprocessConfig& config) {
  Corpus long_enough;
  for (const auto& doc : corpus) {
    if (document_word_count(doc) >= config.min_doc_words) long_enough.push_back(doc);
  }
  if (long_enough.empty()) return long_enough;

  std::vector<double> lengths;
  lengths.reserve(long_enough.size());
  for (const auto& doc : long_enough) lengths.push_back(static_cast<double>(doc.sentences.size()));
  const double lo = empirical_quantile(lengths, config.length_percentile);
  const double hi = empirical_quantile(lengths, 1.0 - config.length_percentile);

  Corpus kept;
  for (auto& doc : long_enough) {
    const auto n = static_cast<double>(doc.sentences.size());
    if (n >= lo && n <= hi) kept.push_back(std::move(doc));
  }
  return kept;
}

}  // namespace milsent
