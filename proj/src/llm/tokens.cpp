#include "pqc/llm/tokens.hpp"

#include <fmt/format.h>

#include "pqc/common/error.hpp"

namespace pqc::llm {

std::size_t estimate_tokens(std::string_view text) {
  std::size_t chars = 0;
  for (unsigned char c : text) {
    if ((c & 0xC0) != 0x80) ++chars;
  }
  return (chars + 3) / 4;
}

namespace {

bool is_heading(std::string_view line, std::size_t level) {
  const std::string marker = std::string(level, '#') + " ";
  return line.substr(0, marker.size()) == marker;
}

// Splits before every line that is a heading of the given level.
std::vector<std::string_view> split_at_level(std::string_view text, std::size_t level) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::size_t end = nl == std::string_view::npos ? text.size() : nl + 1;
    if (pos > start && is_heading(text.substr(pos, end - pos), level)) {
      parts.push_back(text.substr(start, pos - start));
      start = pos;
    }
    pos = end;
  }
  parts.push_back(text.substr(start));
  return parts;
}

void decompose(std::string_view text, std::size_t limit, std::size_t level,
               std::vector<std::string>& out) {
  if (estimate_tokens(text) <= limit) {
    out.emplace_back(text);
    return;
  }
  for (std::size_t lvl = level; lvl <= 6; ++lvl) {
    const auto parts = split_at_level(text, lvl);
    if (parts.size() > 1) {
      for (auto part : parts) decompose(part, limit, lvl + 1, out);
      return;
    }
  }
  throw DataError(fmt::format("spec section of ~{} tokens exceeds the {}-token limit and has no "
                              "further section boundaries",
                              estimate_tokens(text), limit));
}

}  // namespace

std::vector<std::string> decompose_spec(std::string_view spec, std::size_t limit) {
  if (limit == 0) {
    throw UsageError("token limit must be positive");
  }
  std::vector<std::string> out;
  decompose(spec, limit, 2, out);
  return out;
}

}  // namespace pqc::llm
