#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace pqc {

/// Reads a whole file. Throws DataError naming the path on failure.
std::string read_file(const std::filesystem::path& path);

/// Writes via a sibling temporary and rename, creating parent directories.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// Replaces `target` with the fully populated directory `staging`.
/// The old tree is moved aside first and removed only after the swap.
void replace_directory(const std::filesystem::path& staging, const std::filesystem::path& target);

}  // namespace pqc
