#pragma once

// Versioned envelope shared by every machine-readable artifact the tool
// writes: rankings, candidate sets, partition reports, summaries, manifests.
//
//   {"format": "pqc-codesign", "version": 1, "kind": "<kind>", "data": {...}}

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace pqc {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kInterchangeFormat = "pqc-codesign";
inline constexpr int kInterchangeVersion = 1;

Json make_envelope(std::string_view kind, Json data);

/// Validates format, version and kind, and returns the payload.
/// Throws DataError on any mismatch.
Json open_envelope(const Json& doc, std::string_view expected_kind);

/// Canonical text: two-space indent, trailing newline.
std::string dump_interchange(const Json& doc);

/// Throws DataError on malformed JSON.
Json parse_interchange(std::string_view text);

}  // namespace pqc
