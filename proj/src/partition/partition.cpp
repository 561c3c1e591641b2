#include "pqc/partition/partition.hpp"

#include <algorithm>
#include <cctype>
#include <regex>
#include <set>

#include <fmt/format.h>

namespace pqc::partition {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

bool is_identifier_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

// A bare symbol, a wrapped one such as Zf(sampler), or alternatives joined by '/'.
const std::regex& name_pattern() {
  static const std::regex re(R"(^[A-Za-z_][\w]*(\([\w]+\))?(\s*/\s*[A-Za-z_][\w]*(\([\w]+\))?)*$)");
  return re;
}

}  // namespace

std::string_view to_string(CandidateSource source) {
  return source == CandidateSource::profiler ? "profiler" : "llm";
}

std::string_view to_string(PartitionPath path) {
  return path == PartitionPath::profiler_guided ? "profiler-guided" : "source-guided";
}

std::string_view to_string(NameNormalization n) {
  return n == NameNormalization::exact ? "exact" : "prefix";
}

std::optional<NameNormalization> parse_normalization(std::string_view text) {
  if (text == "exact") return NameNormalization::exact;
  if (text == "prefix") return NameNormalization::prefix;
  return std::nullopt;
}

std::vector<std::string> CandidateSet::names() const {
  std::vector<std::string> out;
  for (const auto& c : candidates) out.push_back(c.name);
  return out;
}

std::vector<std::string> default_exclusions() { return {"_init"}; }

CandidateSet profiler_guided_partition(const profile::HotspotRanking& ranking,
                                       const SelectionPolicy& policy) {
  if (ranking.entries.empty()) throw DataError("ranking is empty");
  if (!policy.top_k && !policy.threshold_pct) {
    throw UsageError("selection policy needs a top-k limit, a share threshold, or both");
  }
  if (policy.top_k && *policy.top_k == 0) throw UsageError("top-k must be at least 1");
  if (policy.threshold_pct && (*policy.threshold_pct <= 0 || *policy.threshold_pct > 100)) {
    throw UsageError("share threshold must be in (0, 100]");
  }

  std::size_t limit = ranking.entries.size();
  if (policy.top_k) limit = std::min(limit, *policy.top_k);
  if (policy.threshold_pct) {
    double covered = 0;
    std::size_t needed = 0;
    while (needed < limit && covered < *policy.threshold_pct) {
      covered += ranking.entries[needed++].self_pct;
    }
    limit = needed;
  }

  const std::set<std::string> excluded(policy.exclusions.begin(), policy.exclusions.end());
  CandidateSet set;
  set.path = PartitionPath::profiler_guided;
  set.build_flags = ranking.build_flags;
  for (std::size_t i = 0; i < limit; ++i) {
    const auto& e = ranking.entries[i];
    if (excluded.count(e.function_name)) continue;
    set.candidates.push_back({e.function_name, CandidateSource::profiler, e.self_pct,
                              std::nullopt, fmt::format("{:.2f}% of runtime", e.self_pct)});
  }
  if (set.candidates.empty()) throw DataError("selection policy selects no functions");
  return set;
}

CandidateSet parse_ranked_response(std::string_view response) {
  static const std::regex item(R"(^\s*(?:[-+]\s+)?\d+[.)]\s+(.*)$)");
  CandidateSet set;
  set.path = PartitionPath::source_guided;
  std::set<std::string> seen;

  std::size_t pos = 0;
  while (pos <= response.size()) {
    const auto nl = response.find('\n', pos);
    std::string line(response.substr(pos, nl == std::string_view::npos ? std::string_view::npos
                                                                       : nl - pos));
    pos = nl == std::string_view::npos ? response.size() + 1 : nl + 1;
    line.erase(std::remove_if(line.begin(), line.end(), [](char c) { return c == '`' || c == '*'; }),
               line.end());
    std::smatch m;
    if (!std::regex_match(line, m, item)) continue;
    const std::string rest = m[1].str();

    // The complexity tag starts at the first "O(" that begins a word.
    std::size_t tag_at = std::string::npos;
    for (std::size_t i = 0; i + 1 < rest.size(); ++i) {
      if (rest[i] == 'O' && rest[i + 1] == '(' && (i == 0 || !is_identifier_char(rest[i - 1]))) {
        tag_at = i;
        break;
      }
    }
    std::string head = trim(rest.substr(0, tag_at));
    std::optional<std::string> tag;
    std::string rationale;
    if (tag_at != std::string::npos) {
      // The tag runs to the first top-level ',' or ';'; anything after is commentary.
      std::size_t end = rest.size();
      int depth = 0;
      for (std::size_t i = tag_at; i < rest.size(); ++i) {
        if (rest[i] == '(') ++depth;
        else if (rest[i] == ')') --depth;
        else if (depth == 0 && (rest[i] == ',' || rest[i] == ';')) {
          end = i;
          break;
        }
      }
      tag = trim(rest.substr(tag_at, end - tag_at));
      if (end < rest.size()) rationale = trim(rest.substr(end + 1));
    }

    for (std::string_view sep : {" - ", " \u2013 ", " \u2014 ", ": "}) {
      const auto at = head.find(sep);
      if (at != std::string::npos) {
        const std::string note = trim(head.substr(at + sep.size()));
        rationale = rationale.empty() ? note : note + "; " + rationale;
        head = trim(head.substr(0, at));
      }
    }
    while (!head.empty() && (head.back() == ':' || head.back() == ',' || head.back() == ';' ||
                             head.back() == '-' || head.back() == ' ')) {
      head.pop_back();
    }
    if (head.size() > 2 && head.compare(head.size() - 2, 2, "()") == 0) head.resize(head.size() - 2);
    if (!std::regex_match(head, name_pattern())) {
      // Fall back to the first word; a line whose first word is not a symbol is prose.
      const auto sp = head.find_first_of(" \t");
      if (sp == std::string::npos) continue;
      std::string first = head.substr(0, sp);
      if (!std::regex_match(first, name_pattern())) continue;
      rationale = trim(head.substr(sp));
      head = first;
    }
    if (!seen.insert(head).second) continue;
    set.candidates.push_back({head, CandidateSource::llm, std::nullopt, tag, rationale});
  }
  if (set.candidates.empty()) {
    throw ResponseParseError("response contains no ranked function list",
                             std::string(response));
  }
  return set;
}

CandidateSet source_guided_partition(llm::CompletionBackend& backend,
                                     const std::string& algorithm_id, llm::PromptMode mode,
                                     const std::vector<llm::SourceFile>& sources,
                                     const std::vector<std::string>& function_ids,
                                     const llm::PromptTemplates& templates) {
  if (mode == llm::PromptMode::abstract && algorithm_id.empty() && function_ids.empty()) {
    throw UsageError("abstract mode needs an algorithm or function identifiers");
  }
  const auto prompt = llm::build_ranking_prompt(algorithm_id, mode, sources, function_ids, templates);
  auto set = parse_ranked_response(backend.complete(prompt.body));
  set.prompt_mode = mode;
  return set;
}

std::string strip_macro_wrapper(std::string_view name) {
  static const std::regex wrapper(R"(\bZf\(([^()]*)\))");
  return std::regex_replace(std::string(name), wrapper, "$1");
}

bool names_match(std::string_view a, std::string_view b, NameNormalization n) {
  if (n == NameNormalization::exact) return a == b;
  const std::string x = strip_macro_wrapper(a);
  const std::string y = strip_macro_wrapper(b);
  if (x.empty() || y.empty()) return false;
  const auto& shorter = x.size() <= y.size() ? x : y;
  const auto& longer = x.size() <= y.size() ? y : x;
  return longer.compare(0, shorter.size(), shorter) == 0;
}

AgreementReport ranking_agreement(const CandidateSet& a, const CandidateSet& b, std::size_t k,
                                  NameNormalization normalization) {
  if (k == 0) throw UsageError("agreement depth k must be at least 1");
  if (k > a.size() || k > b.size()) {
    throw UsageError(fmt::format("agreement depth k={} exceeds a candidate set ({} and {} entries)",
                                 k, a.size(), b.size()));
  }
  // Maximum bipartite matching (augmenting paths) over the top-k names.
  std::vector<int> owner(k, -1);  // b index -> a index
  auto augment = [&](auto&& self, std::size_t i, std::vector<bool>& visited) -> bool {
    for (std::size_t j = 0; j < k; ++j) {
      if (visited[j] || !names_match(a.candidates[i].name, b.candidates[j].name, normalization)) {
        continue;
      }
      visited[j] = true;
      if (owner[j] < 0 || self(self, static_cast<std::size_t>(owner[j]), visited)) {
        owner[j] = static_cast<int>(i);
        return true;
      }
    }
    return false;
  };
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<bool> visited(k, false);
    augment(augment, i, visited);
  }
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t j = 0; j < k; ++j) {
    if (owner[j] >= 0) pairs.emplace_back(static_cast<std::size_t>(owner[j]), j);
  }
  std::sort(pairs.begin(), pairs.end());

  AgreementReport r;
  r.k = k;
  r.normalization = normalization;
  for (const auto& [i, j] : pairs) r.matches.emplace_back(a.candidates[i].name, b.candidates[j].name);
  const double overlap = static_cast<double>(r.matches.size());
  r.jaccard = overlap / (2.0 * static_cast<double>(k) - overlap);
  return r;
}

PartitionReport emit_partition_report(CandidateSet profiler_set, CandidateSet llm_set,
                                      std::optional<AgreementReport> agreement) {
  return {std::move(profiler_set), std::move(llm_set), std::move(agreement)};
}

std::string render_partition_text(const PartitionReport& report) {
  const bool two_columns = !report.llm.candidates.empty();
  std::string left = "profiler-guided";
  if (!report.profiler.build_flags.empty()) left += " (" + report.profiler.build_flags + ")";
  std::string right = "source-guided";
  if (report.llm.prompt_mode) right += " (" + std::string(llm::to_string(*report.llm.prompt_mode)) + ")";

  std::string out;
  out += fmt::format("{:>4}  {:<36} {:>9}", "rank", left, "% runtime");
  out += two_columns ? fmt::format("  {}\n", right) : "\n";
  const std::size_t rows = std::max(report.profiler.size(), report.llm.size());
  for (std::size_t i = 0; i < rows; ++i) {
    std::string line = fmt::format("{:>4}  ", i + 1);
    if (i < report.profiler.size()) {
      const auto& c = report.profiler.candidates[i];
      line += fmt::format("{:<36} {:>9}", c.name, c.score ? fmt::format("{:.2f}", *c.score) : "-");
    } else {
      line += fmt::format("{:<36} {:>9}", "", "");
    }
    if (two_columns && i < report.llm.size()) {
      const auto& c = report.llm.candidates[i];
      line += "  " + c.name;
      if (c.complexity_tag) line += "  " + *c.complexity_tag;
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + "\n";
  }
  if (!report.agreement) {
    out += "agreement: n/a\n";
    return out;
  }
  const auto& a = *report.agreement;
  std::vector<std::string> members;
  for (const auto& [x, y] : a.matches) members.push_back(x == y ? x : x + "~" + y);
  out += fmt::format("agreement (k={}, {}): overlap {} {{{}}}, jaccard {:.3f}\n", a.k,
                     to_string(a.normalization), a.overlap(), fmt::join(members, ", "), a.jaccard);
  return out;
}

// ---------------------------------------------------------------------------

Json to_json(const CandidateSet& set) {
  Json j;
  j["path"] = to_string(set.path);
  j["prompt_mode"] = set.prompt_mode ? Json(llm::to_string(*set.prompt_mode)) : Json();
  j["build_flags"] = set.build_flags;
  j["candidates"] = Json::array();
  for (const auto& c : set.candidates) {
    j["candidates"].push_back({{"name", c.name},
                               {"source", to_string(c.source)},
                               {"score", c.score ? Json(*c.score) : Json()},
                               {"complexity_tag", c.complexity_tag ? Json(*c.complexity_tag) : Json()},
                               {"rationale", c.rationale}});
  }
  return j;
}

CandidateSet candidate_set_from_json(const Json& data) {
  CandidateSet set;
  try {
    const auto path = data.at("path").get<std::string>();
    if (path == "profiler-guided") set.path = PartitionPath::profiler_guided;
    else if (path == "source-guided") set.path = PartitionPath::source_guided;
    else throw DataError("unknown partition path " + path);
    if (!data.at("prompt_mode").is_null()) {
      set.prompt_mode = llm::parse_prompt_mode(data.at("prompt_mode").get<std::string>());
      if (!set.prompt_mode) throw DataError("unknown prompt mode");
    }
    set.build_flags = data.at("build_flags").get<std::string>();
    std::set<std::string> seen;
    for (const auto& c : data.at("candidates")) {
      CandidateFunction f;
      f.name = c.at("name").get<std::string>();
      const auto source = c.at("source").get<std::string>();
      if (source == "profiler") f.source = CandidateSource::profiler;
      else if (source == "llm") f.source = CandidateSource::llm;
      else throw DataError("unknown candidate source " + source);
      if (!c.at("score").is_null()) f.score = c.at("score").get<double>();
      if (!c.at("complexity_tag").is_null()) f.complexity_tag = c.at("complexity_tag").get<std::string>();
      f.rationale = c.at("rationale").get<std::string>();
      if (f.name.empty()) throw DataError("candidate with empty name");
      if (f.score.has_value() != (f.source == CandidateSource::profiler)) {
        throw DataError("candidate " + f.name + ": score must be present exactly for profiler candidates");
      }
      if (!seen.insert(f.name).second) throw DataError("duplicate candidate " + f.name);
      set.candidates.push_back(std::move(f));
    }
  } catch (const Json::exception& ex) {
    throw DataError(std::string("malformed candidate set: ") + ex.what());
  }
  return set;
}

Json to_json(const AgreementReport& r) {
  Json j;
  j["k"] = r.k;
  j["normalization"] = to_string(r.normalization);
  j["overlap"] = r.overlap();
  j["jaccard"] = r.jaccard;
  j["matches"] = Json::array();
  for (const auto& [x, y] : r.matches) j["matches"].push_back({x, y});
  return j;
}

AgreementReport agreement_from_json(const Json& data) {
  AgreementReport r;
  try {
    r.k = data.at("k").get<std::size_t>();
    const auto n = parse_normalization(data.at("normalization").get<std::string>());
    if (!n) throw DataError("unknown normalization");
    r.normalization = *n;
    r.jaccard = data.at("jaccard").get<double>();
    for (const auto& m : data.at("matches")) {
      r.matches.emplace_back(m.at(0).get<std::string>(), m.at(1).get<std::string>());
    }
    if (data.at("overlap").get<std::size_t>() != r.matches.size()) {
      throw DataError("agreement overlap does not match its member list");
    }
  } catch (const Json::exception& ex) {
    throw DataError(std::string("malformed agreement: ") + ex.what());
  }
  return r;
}

Json to_json(const PartitionReport& report) {
  Json j;
  j["profiler"] = to_json(report.profiler);
  j["llm"] = to_json(report.llm);
  j["agreement"] = report.agreement ? to_json(*report.agreement) : Json("n/a");
  return j;
}

PartitionReport partition_report_from_json(const Json& data) {
  PartitionReport r;
  try {
    r.profiler = candidate_set_from_json(data.at("profiler"));
    r.llm = candidate_set_from_json(data.at("llm"));
    if (!data.at("agreement").is_string()) r.agreement = agreement_from_json(data.at("agreement"));
  } catch (const Json::exception& ex) {
    throw DataError(std::string("malformed partition report: ") + ex.what());
  }
  return r;
}

}  // namespace pqc::partition
