#pragma once

#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace viscom::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitUser = 2;

// Bad input files, arguments or configuration (exit code 2).
class UserError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Entry point behind the `viscom` executable; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

std::string sha256_hex_file(const std::string& path);

}  // namespace viscom::cli
