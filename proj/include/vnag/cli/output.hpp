#pragma once

#include <filesystem>
#include <map>
#include <string>

namespace vnag::cli {

/// Output files accumulated in memory and written only once the experiment
/// has finished.  If writing fails, every file already written is removed.
class OutputSet {
 public:
  void add(const std::string& name, std::string content);
  const std::map<std::string, std::string>& files() const { return files_; }

  /// Writes each file through a temporary name and a rename.
  void commit(const std::filesystem::path& dir) const;

 private:
  std::map<std::string, std::string> files_;
};

}  // namespace vnag::cli
