#include "vnag/cli/output.hpp"

#include <fstream>
#include <stdexcept>
#include <system_error>
#include <vector>

namespace vnag::cli {

namespace fs = std::filesystem;

void OutputSet::add(const std::string& name, std::string content) { files_[name] = std::move(content); }

void OutputSet::commit(const fs::path& dir) const {
  std::vector<fs::path> written;
  std::error_code ec;
  const bool created_dir = !fs::exists(dir, ec);
  try {
    fs::create_directories(dir);
    for (const auto& [name, content] : files_) {
      const fs::path target = dir / name;
      const fs::path tmp = dir / (name + ".partial");
      written.push_back(tmp);
      {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) throw std::runtime_error("write failed for '" + tmp.string() + "'");
      }
      fs::rename(tmp, target);
      written.back() = target;
    }
  } catch (...) {
    for (const fs::path& p : written) fs::remove(p, ec);
    if (created_dir) fs::remove(dir, ec);
    throw;
  }
}

}  // namespace vnag::cli
