#include "pqc/common/fs.hpp"

#include <fstream>
#include <sstream>

#include "pqc/common/error.hpp"

namespace pqc {

namespace fs = std::filesystem;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError("cannot read " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const fs::path& path, std::string_view content) {
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path());
  }
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw DataError("cannot write " + tmp.string());
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
      throw DataError("short write to " + tmp.string());
    }
  }
  fs::rename(tmp, path);
}

void replace_directory(const fs::path& staging, const fs::path& target) {
  fs::path old = target;
  old += ".old";
  fs::remove_all(old);
  if (fs::exists(target)) {
    fs::rename(target, old);
  }
  fs::rename(staging, target);
  fs::remove_all(old);
}

}  // namespace pqc
