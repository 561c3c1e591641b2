#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pqc/common/interchange.hpp"

namespace pqc::profile {

/// One row of a gprof flat profile.
struct ProfileEntry {
  std::string function_name;
  double self_pct = 0;
  double cumulative_seconds = 0;
  double self_seconds = 0;
  std::optional<std::uint64_t> calls;
  std::optional<double> self_ms_per_call;
  std::optional<double> total_ms_per_call;

  friend bool operator==(const ProfileEntry&, const ProfileEntry&) = default;
};

/// Parses the flat-profile section of a gprof report.
///
/// Rows start after the column header (the line naming "time", "calls" and
/// "name") and end at the first blank line. Rows of non-instrumented symbols
/// carry only the three leading columns. The call-graph section and the
/// explanatory text are ignored. Throws ParseError with the line number.
std::vector<ProfileEntry> parse_flat_profile(std::string_view text);

/// Writes entries back in gprof flat-profile layout.
std::string format_flat_profile(const std::vector<ProfileEntry>& entries);

Json to_json(const ProfileEntry& e);
ProfileEntry entry_from_json(const Json& j);

}  // namespace pqc::profile
