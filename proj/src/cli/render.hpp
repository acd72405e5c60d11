#pragma once

#include <string>

#include "milsent/corpus.hpp"

namespace milsent::cli {

enum class RenderFormat { ansi, html };

/// Document text with one highlighted run per sentence: light gray for
/// positive, dark gray for negative. Throws ConfigError if no sentence
/// carries a prediction.
std::string render_document(const Document& doc, RenderFormat format);

std::string html_escape(std::string_view text);

}  // namespace milsent::cli
