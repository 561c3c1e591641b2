#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace pqc::llm {

/// Fixed heuristic: ceil(characters / 4), counting UTF-8 code points.
std::size_t estimate_tokens(std::string_view text);

/// Splits a kernel spec so every piece fits the token limit.
///
/// Section boundaries are markdown headings ("## ", then "### ", ...). A
/// spec that fits is returned whole; otherwise it is split at the top-level
/// headings and any piece still over the limit is split at the next level.
/// The pieces concatenate back to the input exactly. A piece that is over the
/// limit and has no deeper heading throws DataError.
std::vector<std::string> decompose_spec(std::string_view spec, std::size_t limit);

}  // namespace pqc::llm
