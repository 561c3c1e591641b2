#pragma once

#include <string>
#include <vector>

#include "pqc/common/interchange.hpp"
#include "pqc/profile/flat_profile.hpp"

namespace pqc::profile {

/// Top entries of a profile, most expensive first.
struct HotspotRanking {
  std::vector<ProfileEntry> entries;
  std::string build_flags;  // provenance, e.g. "-O3 -fno-inline"

  double total_pct_covered() const;
  std::vector<std::string> names() const;

  friend bool operator==(const HotspotRanking&, const HotspotRanking&) = default;
};

/// Top-k by self percentage, descending; equal shares order by ascending
/// name. k = 0 throws UsageError.
HotspotRanking rank_hotspots(std::vector<ProfileEntry> entries, std::size_t k,
                             std::string build_flags = {});

/// What inlining hides: compares the default build's ranking with the
/// ranking of a build that keeps every routine out of line.
struct InlineExposureReport {
  std::vector<std::string> hidden_by_inlining;  // only in the no-inline view
  std::vector<std::string> in_both;
  std::vector<std::string> only_in_inlined_view;
  double inlined_coverage_pct = 0;
  double noinline_coverage_pct = 0;
};

InlineExposureReport diff_inline_views(const HotspotRanking& inlined,
                                       const HotspotRanking& noinline);

std::string render_ranking_text(const HotspotRanking& ranking);
std::string render_exposure_text(const InlineExposureReport& report);

Json to_json(const HotspotRanking& ranking);
HotspotRanking ranking_from_json(const Json& data);
Json to_json(const InlineExposureReport& report);

}  // namespace pqc::profile
