#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qbs::cli {

inline constexpr const char* kVersion = "0.1.0";

// Exit codes
inline constexpr int kOk = 0;
inline constexpr int kConfigError = 2;
inline constexpr int kNumericAbort = 3;
inline constexpr int kIoError = 4;

// args excludes the program name.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::string& path);

}  // namespace qbs::cli
