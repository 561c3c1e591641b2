#include "pqc/llm/vectors.hpp"

#include <fmt/format.h>

#include "pqc/common/error.hpp"

namespace pqc::llm {

using namespace pqc::kernel;

std::string vector_file_name(KernelId kernel) {
  return std::string(to_string(kernel)) + "_vectors.hex";
}

std::string emit_test_vectors(KernelId kernel, std::size_t n, std::uint64_t seed) {
  if (n == 0) {
    throw UsageError("vector count must be at least 1");
  }
  std::vector<TestVector> vectors;
  for (auto& in : generate_inputs(kernel, n, seed)) {
    KernelOutput out = evaluate(in);
    vectors.push_back({std::move(in), std::move(out)});
  }
  return format_vector_file(
      kernel, vectors,
      {fmt::format("seed={} random={} edge={}", seed, n, edge_vector_count(kernel)),
       "fields: inputs then expected output, lowercase hex"});
}

std::string emit_test_vectors(std::string_view kernel_name, std::size_t n, std::uint64_t seed) {
  const auto id = parse_kernel_id(kernel_name);
  if (!id) {
    throw DataError("unknown kernel '" + std::string(kernel_name) + "'");
  }
  return emit_test_vectors(*id, n, seed);
}

std::size_t recheck_vectors(std::string_view vector_file, std::string* report) {
  const VectorFile file = parse_vector_file(vector_file);
  std::size_t mismatches = 0;
  for (std::size_t i = 0; i < file.vectors.size(); ++i) {
    const auto& v = file.vectors[i];
    const KernelOutput got = evaluate(v.input);
    if (got != v.expected) {
      ++mismatches;
      if (report) {
        *report += fmt::format("vector {}: {} expected {} recomputed {}\n", i, describe(v.input),
                               describe(v.expected), describe(got));
      }
    }
  }
  return mismatches;
}

}  // namespace pqc::llm
