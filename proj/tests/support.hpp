#pragma once

#include <filesystem>
#include <string>

namespace viscom::test {

inline std::string fixture(const std::string& rel) {
  return (std::filesystem::path(VISCOM_FIXTURES) / rel).string();
}

// Fresh scratch directory under the build tree.
inline std::string scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("viscom_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir.string();
}

}  // namespace viscom::test
