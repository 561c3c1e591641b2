#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "pqc/kernel/kernel_io.hpp"

namespace pqc::llm {

/// Vector file for one kernel: edge cases first, then n seeded random
/// vectors, expected outputs from the reference kernels.
std::string emit_test_vectors(kernel::KernelId kernel, std::size_t n, std::uint64_t seed);

/// Same, by kernel name. Unknown names throw DataError.
std::string emit_test_vectors(std::string_view kernel_name, std::size_t n, std::uint64_t seed);

/// Recomputes every vector with the reference kernels. Returns the number of
/// mismatches; each one is appended to `report` when given.
std::size_t recheck_vectors(std::string_view vector_file, std::string* report = nullptr);

/// File name the testbench is told to read.
std::string vector_file_name(kernel::KernelId kernel);

}  // namespace pqc::llm
