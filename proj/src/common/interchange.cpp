#include "pqc/common/interchange.hpp"

#include "pqc/common/error.hpp"

namespace pqc {

Json make_envelope(std::string_view kind, Json data) {
  Json doc;
  doc["format"] = kInterchangeFormat;
  doc["version"] = kInterchangeVersion;
  doc["kind"] = kind;
  doc["data"] = std::move(data);
  return doc;
}

Json open_envelope(const Json& doc, std::string_view expected_kind) {
  if (!doc.is_object() || doc.value("format", "") != kInterchangeFormat) {
    throw DataError("not a pqc-codesign interchange document");
  }
  if (doc.value("version", 0) != kInterchangeVersion) {
    throw DataError("unsupported interchange version " + doc.value("version", Json()).dump());
  }
  const std::string kind = doc.value("kind", "");
  if (kind != expected_kind) {
    throw DataError("expected interchange kind '" + std::string(expected_kind) + "', got '" + kind +
                    "'");
  }
  if (!doc.contains("data")) {
    throw DataError("interchange document has no data");
  }
  return doc.at("data");
}

std::string dump_interchange(const Json& doc) { return doc.dump(2) + "\n"; }

Json parse_interchange(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw DataError(std::string("malformed interchange document: ") + e.what());
  }
}

}  // namespace pqc
