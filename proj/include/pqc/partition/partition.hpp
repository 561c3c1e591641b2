#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pqc/common/error.hpp"
#include "pqc/common/interchange.hpp"
#include "pqc/llm/backend.hpp"
#include "pqc/llm/prompt.hpp"
#include "pqc/profile/ranking.hpp"

namespace pqc::partition {

enum class CandidateSource { profiler, llm };
enum class PartitionPath { profiler_guided, source_guided };

std::string_view to_string(CandidateSource source);
std::string_view to_string(PartitionPath path);

struct CandidateFunction {
  std::string name;
  CandidateSource source = CandidateSource::profiler;
  std::optional<double> score;  // runtime share, profiler path only
  std::optional<std::string> complexity_tag;
  std::string rationale;

  friend bool operator==(const CandidateFunction&, const CandidateFunction&) = default;
};

/// Ordered most significant first; names are unique.
struct CandidateSet {
  std::vector<CandidateFunction> candidates;
  PartitionPath path = PartitionPath::profiler_guided;
  std::optional<llm::PromptMode> prompt_mode;  // source-guided path only
  std::string build_flags;                     // profiler path provenance

  std::vector<std::string> names() const;
  std::size_t size() const { return candidates.size(); }

  friend bool operator==(const CandidateSet&, const CandidateSet&) = default;
};

/// Names never offered for acceleration unless the caller says otherwise.
std::vector<std::string> default_exclusions();

/// top_k is applied to the ranking first, then the cumulative-share threshold
/// (summing every ranked share, excluded or not, until it reaches the
/// threshold), then the exclusions.
struct SelectionPolicy {
  std::optional<std::size_t> top_k;
  std::optional<double> threshold_pct;
  std::vector<std::string> exclusions = default_exclusions();
};

/// Deterministic selection from a profile ranking. Selecting nothing throws
/// DataError; a policy with neither top_k nor threshold throws UsageError.
CandidateSet profiler_guided_partition(const profile::HotspotRanking& ranking,
                                       const SelectionPolicy& policy);

/// The backend answered with something that has no ranked list in it.
class ResponseParseError : public DataError {
 public:
  ResponseParseError(const std::string& what, std::string raw)
      : DataError(what), raw_(std::move(raw)) {}
  const std::string& raw_response() const { return raw_; }

 private:
  std::string raw_;
};

/// Reads a ranked list out of free text. Item lines start with an ordinal
/// ("1." or "1)"); the name comes next, then an optional complexity tag
/// starting at "O(", then optional commentary. Other lines are ignored,
/// markdown emphasis and backticks are dropped, repeated names keep their
/// first rank.
CandidateSet parse_ranked_response(std::string_view response);

/// Builds the ranking prompt, asks the backend once and parses the answer.
CandidateSet source_guided_partition(
    llm::CompletionBackend& backend, const std::string& algorithm_id, llm::PromptMode mode,
    const std::vector<llm::SourceFile>& sources = {},
    const std::vector<std::string>& function_ids = {},
    const llm::PromptTemplates& templates = llm::PromptTemplates::builtin());

enum class NameNormalization { exact, prefix };
std::string_view to_string(NameNormalization n);
std::optional<NameNormalization> parse_normalization(std::string_view text);

/// Removes every "Zf(...)" wrapper, keeping its argument.
std::string strip_macro_wrapper(std::string_view name);

/// exact: identical strings. prefix: after stripping wrappers, one name is a
/// prefix of the other.
bool names_match(std::string_view a, std::string_view b, NameNormalization n);

struct AgreementReport {
  std::size_t k = 0;
  NameNormalization normalization = NameNormalization::exact;
  std::vector<std::pair<std::string, std::string>> matches;  // (name in a, name in b)
  double jaccard = 0;

  std::size_t overlap() const { return matches.size(); }
  friend bool operator==(const AgreementReport&, const AgreementReport&) = default;
};

/// Top-k overlap of two candidate sets. Under prefix normalization each name
/// pairs with at most one name of the other set (maximum matching). Jaccard
/// is overlap / (2k - overlap). k = 0 or k above either size throws
/// UsageError.
AgreementReport ranking_agreement(const CandidateSet& a, const CandidateSet& b, std::size_t k,
                                  NameNormalization normalization);

struct PartitionReport {
  CandidateSet profiler;
  CandidateSet llm;  // may be empty
  std::optional<AgreementReport> agreement;

  friend bool operator==(const PartitionReport&, const PartitionReport&) = default;
};

PartitionReport emit_partition_report(CandidateSet profiler_set, CandidateSet llm_set,
                                      std::optional<AgreementReport> agreement);

/// Side-by-side table, one row per rank.
std::string render_partition_text(const PartitionReport& report);

Json to_json(const CandidateSet& set);
CandidateSet candidate_set_from_json(const Json& data);
Json to_json(const AgreementReport& report);
AgreementReport agreement_from_json(const Json& data);
Json to_json(const PartitionReport& report);
PartitionReport partition_report_from_json(const Json& data);

}  // namespace pqc::partition
