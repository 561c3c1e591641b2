#include "pqc/profile/flat_profile.hpp"

#include <charconv>

#include <fmt/format.h>

#include "pqc/common/error.hpp"

namespace pqc::profile {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

std::optional<double> to_double(std::string_view s) {
  double v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<std::uint64_t> to_count(std::string_view s) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

bool is_header(const std::vector<std::string_view>& tokens) {
  bool time = false, calls = false, name = false;
  for (auto t : tokens) {
    time |= t == "time";
    calls |= t == "calls";
    name |= t == "name";
  }
  return time && calls && name;
}

ProfileEntry parse_row(std::string_view line, std::size_t lineno) {
  const auto tokens = split_ws(line);
  static constexpr const char* kColumns[] = {"% time", "cumulative seconds", "self seconds"};
  if (tokens.size() < 4) {
    throw ParseError(lineno, "flat-profile row needs at least 4 columns");
  }
  ProfileEntry e;
  double* leading[] = {&e.self_pct, &e.cumulative_seconds, &e.self_seconds};
  for (std::size_t c = 0; c < 3; ++c) {
    const auto v = to_double(tokens[c]);
    if (!v) {
      throw ParseError(lineno, fmt::format("malformed numeric field '{}' in column '{}'",
                                           tokens[c], kColumns[c]));
    }
    *leading[c] = *v;
  }
  // Optional calls / self ms/call / total ms/call, then the symbol name.
  std::size_t next = 3;
  if (tokens.size() >= 5) {
    if (auto calls = to_count(tokens[3])) {
      e.calls = calls;
      next = 4;
      if (tokens.size() >= 7) {
        const auto self_ms = to_double(tokens[4]);
        const auto total_ms = to_double(tokens[5]);
        if (!self_ms || !total_ms) {
          throw ParseError(lineno, "malformed numeric field in 'ms/call' columns");
        }
        e.self_ms_per_call = self_ms;
        e.total_ms_per_call = total_ms;
        next = 6;
      }
    }
  }
  // Names are taken verbatim, including any embedded spaces.
  const auto name_start = static_cast<std::size_t>(tokens[next].data() - line.data());
  std::string_view name = line.substr(name_start);
  while (!name.empty() && (name.back() == ' ' || name.back() == '\t')) name.remove_suffix(1);
  e.function_name = std::string(name);
  if (e.self_pct < 0 || e.self_pct > 100) {
    throw ParseError(lineno, fmt::format("'% time' {} outside [0, 100]", e.self_pct));
  }
  if (e.self_seconds < 0 || e.cumulative_seconds < 0) {
    throw ParseError(lineno, "negative seconds");
  }
  return e;
}

std::string num(double v) {
  std::string s = fmt::format("{:.2f}", v);
  if (to_double(s) == v) return s;
  return fmt::format("{}", v);
}

}  // namespace

std::vector<ProfileEntry> parse_flat_profile(std::string_view text) {
  std::vector<ProfileEntry> entries;
  bool in_table = false;
  bool saw_header = false;
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const auto tokens = split_ws(line);
    if (!in_table) {
      if (is_header(tokens)) {
        in_table = true;
        saw_header = true;
      }
      continue;
    }
    if (tokens.empty() || line.front() == '\f') break;
    entries.push_back(parse_row(line, lineno));
  }
  if (!saw_header) {
    throw DataError("no flat-profile column header found");
  }
  return entries;
}

std::string format_flat_profile(const std::vector<ProfileEntry>& entries) {
  std::string out =
      "Flat profile:\n\n"
      "Each sample counts as 0.01 seconds.\n"
      "  %   cumulative   self              self     total           \n"
      " time   seconds   seconds    calls  ms/call  ms/call  name    \n";
  for (const auto& e : entries) {
    out += fmt::format("{:>6} {:>9} {:>8}", num(e.self_pct), num(e.cumulative_seconds),
                       num(e.self_seconds));
    if (e.calls) {
      out += fmt::format(" {:>8}", *e.calls);
      if (e.self_ms_per_call && e.total_ms_per_call) {
        out += fmt::format(" {:>8} {:>8}", num(*e.self_ms_per_call), num(*e.total_ms_per_call));
      }
    } else {
      out += std::string(27, ' ');
    }
    out += "  " + e.function_name + "\n";
  }
  out += "\n";
  return out;
}

Json to_json(const ProfileEntry& e) {
  Json j;
  j["name"] = e.function_name;
  j["self_pct"] = e.self_pct;
  j["cumulative_seconds"] = e.cumulative_seconds;
  j["self_seconds"] = e.self_seconds;
  j["calls"] = e.calls ? Json(*e.calls) : Json();
  j["self_ms_per_call"] = e.self_ms_per_call ? Json(*e.self_ms_per_call) : Json();
  j["total_ms_per_call"] = e.total_ms_per_call ? Json(*e.total_ms_per_call) : Json();
  return j;
}

ProfileEntry entry_from_json(const Json& j) {
  try {
    ProfileEntry e;
    e.function_name = j.at("name").get<std::string>();
    e.self_pct = j.at("self_pct").get<double>();
    e.cumulative_seconds = j.at("cumulative_seconds").get<double>();
    e.self_seconds = j.at("self_seconds").get<double>();
    if (!j.at("calls").is_null()) e.calls = j.at("calls").get<std::uint64_t>();
    if (!j.at("self_ms_per_call").is_null()) e.self_ms_per_call = j.at("self_ms_per_call").get<double>();
    if (!j.at("total_ms_per_call").is_null()) e.total_ms_per_call = j.at("total_ms_per_call").get<double>();
    if (e.function_name.empty()) throw DataError("profile entry has an empty name");
    return e;
  } catch (const Json::exception& ex) {
    throw DataError(std::string("malformed profile entry: ") + ex.what());
  }
}

}  // namespace pqc::profile
