#include "cli/render.hpp"

#include <algorithm>
#include <cstdio>

#include "milsent/error.hpp"

namespace milsent::cli {

namespace {

constexpr const char* kAnsiPositive = "\x1b[30;47m";   // black on light gray
constexpr const char* kAnsiNegative = "\x1b[97;100m";  // white on dark gray
constexpr const char* kAnsiReset = "\x1b[0m";

std::string header_line(const Document& doc) {
  std::string h = doc.id;
  if (!doc.ticker.empty()) h += " (" + doc.ticker + ")";
  h += ", " + format_date(doc.published_at);
  if (doc.abnormal_return) {
    char buf[48];
    std::snprintf(buf, sizeof buf, ", abnormal return %+.2f%%", 100.0 * *doc.abnormal_return);
    h += buf;
  }
  if (doc.predicted_label) h += ", predicted " + std::string(to_string(*doc.predicted_label));
  return h;
}

}  // namespace

std::string html_escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string render_document(const Document& doc, RenderFormat format) {
  const bool any = std::any_of(doc.sentences.begin(), doc.sentences.end(),
                               [](const SentenceInstance& s) { return s.predicted_label.has_value(); });
  if (!any) {
    throw ConfigError("document '" + doc.id + "' has no sentence predictions; run 'milsent predict' first");
  }

  std::string out;
  if (format == RenderFormat::ansi) {
    out += header_line(doc) + "\n\n";
    for (std::size_t i = 0; i < doc.sentences.size(); ++i) {
      const auto& s = doc.sentences[i];
      if (i > 0) out += ' ';
      const auto p = s.predicted_label;
      if (p == Prediction::positive) {
        out += kAnsiPositive + s.text + kAnsiReset;
      } else if (p == Prediction::negative) {
        out += kAnsiNegative + s.text + kAnsiReset;
      } else {
        out += s.text;
      }
    }
    out += "\n";
    return out;
  }

  out += "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n<title>" + html_escape(doc.id) +
         "</title>\n<style>\n"
         "body { font-family: monospace; max-width: 60em; margin: 2em auto; }\n"
         "span.pos { background: #d3d3d3; }\n"
         "span.neg { background: #696969; color: #ffffff; }\n"
         "</style>\n</head>\n<body>\n";
  out += "<h1>" + html_escape(header_line(doc)) + "</h1>\n<p>\n";
  for (const auto& s : doc.sentences) {
    const auto p = s.predicted_label;
    const char* cls = p == Prediction::positive ? "pos" : p == Prediction::negative ? "neg" : "none";
    out += "<span class=\"" + std::string(cls) + "\"";
    if (s.score) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.4f", *s.score);
      out += std::string(" title=\"score ") + buf + "\"";
    }
    out += ">" + html_escape(s.text) + "</span>\n";
  }
  out += "</p>\n</body>\n</html>\n";
  return out;
}

}  // namespace milsent::cli
