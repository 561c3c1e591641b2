#pragma once

#include <optional>
#include <string_view>

namespace pqc::llm {

/// Text assets compiled into the binary from assets/ (prompt templates and
/// kernel reference sources), keyed by path relative to assets/.
std::optional<std::string_view> embedded_asset(std::string_view name);

}  // namespace pqc::llm
