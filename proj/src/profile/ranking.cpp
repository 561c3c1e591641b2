#include "pqc/profile/ranking.hpp"

#include <algorithm>
#include <set>

#include <fmt/format.h>

#include "pqc/common/error.hpp"

namespace pqc::profile {

double HotspotRanking::total_pct_covered() const {
  double sum = 0;
  for (const auto& e : entries) sum += e.self_pct;
  return sum;
}

std::vector<std::string> HotspotRanking::names() const {
  std::vector<std::string> out;
  for (const auto& e : entries) out.push_back(e.function_name);
  return out;
}

HotspotRanking rank_hotspots(std::vector<ProfileEntry> entries, std::size_t k,
                             std::string build_flags) {
  if (k == 0) {
    throw UsageError("ranking size k must be at least 1");
  }
  std::stable_sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    if (a.self_pct != b.self_pct) return a.self_pct > b.self_pct;
    return a.function_name < b.function_name;
  });
  if (entries.size() > k) entries.resize(k);
  return {std::move(entries), std::move(build_flags)};
}

InlineExposureReport diff_inline_views(const HotspotRanking& inlined,
                                       const HotspotRanking& noinline) {
  if (inlined.entries.empty() || noinline.entries.empty()) {
    throw DataError("inline-exposure diff needs two nonempty rankings");
  }
  const auto a = inlined.names();
  const auto b = noinline.names();
  const std::set<std::string> in_a(a.begin(), a.end());
  const std::set<std::string> in_b(b.begin(), b.end());
  InlineExposureReport r;
  for (const auto& name : b) {
    (in_a.count(name) ? r.in_both : r.hidden_by_inlining).push_back(name);
  }
  for (const auto& name : a) {
    if (!in_b.count(name)) r.only_in_inlined_view.push_back(name);
  }
  r.inlined_coverage_pct = inlined.total_pct_covered();
  r.noinline_coverage_pct = noinline.total_pct_covered();
  return r;
}

std::string render_ranking_text(const HotspotRanking& ranking) {
  std::string out;
  if (!ranking.build_flags.empty()) out += "# build flags: " + ranking.build_flags + "\n";
  out += fmt::format("{:>4}  {:<32} {:>9}\n", "rank", "function", "% runtime");
  std::size_t rank = 1;
  for (const auto& e : ranking.entries) {
    out += fmt::format("{:>4}  {:<32} {:>9.2f}\n", rank++, e.function_name, e.self_pct);
  }
  out += fmt::format("covered: {:.2f}%\n", ranking.total_pct_covered());
  return out;
}

std::string render_exposure_text(const InlineExposureReport& r) {
  auto list = [](const std::vector<std::string>& v) {
    return v.empty() ? std::string("(none)") : fmt::format("{}", fmt::join(v, ", "));
  };
  std::string out;
  out += "hidden by inlining: " + list(r.hidden_by_inlining) + "\n";
  out += "in both views:      " + list(r.in_both) + "\n";
  out += "inlined view only:  " + list(r.only_in_inlined_view) + "\n";
  out += fmt::format("coverage: inlined {:.2f}%, no-inline {:.2f}%\n", r.inlined_coverage_pct,
                     r.noinline_coverage_pct);
  return out;
}

Json to_json(const HotspotRanking& ranking) {
  Json j;
  j["build_flags"] = ranking.build_flags;
  j["total_pct_covered"] = ranking.total_pct_covered();
  j["entries"] = Json::array();
  for (const auto& e : ranking.entries) j["entries"].push_back(to_json(e));
  return j;
}

HotspotRanking ranking_from_json(const Json& data) {
  HotspotRanking r;
  try {
    r.build_flags = data.at("build_flags").get<std::string>();
    for (const auto& e : data.at("entries")) r.entries.push_back(entry_from_json(e));
  } catch (const Json::exception& ex) {
    throw DataError(std::string("malformed ranking: ") + ex.what());
  }
  for (std::size_t i = 1; i < r.entries.size(); ++i) {
    if (r.entries[i].self_pct > r.entries[i - 1].self_pct) {
      throw DataError("ranking entries are not sorted by share");
    }
  }
  return r;
}

Json to_json(const InlineExposureReport& r) {
  Json j;
  j["hidden_by_inlining"] = r.hidden_by_inlining;
  j["in_both"] = r.in_both;
  j["only_in_inlined_view"] = r.only_in_inlined_view;
  j["inlined_coverage_pct"] = r.inlined_coverage_pct;
  j["noinline_coverage_pct"] = r.noinline_coverage_pct;
  return j;
}

}  // namespace pqc::profile
