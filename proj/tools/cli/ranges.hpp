#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qbs::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Product/quotient of numbers and `pi`, with an optional leading sign:
// "0.2", "-pi", "pi/8", "-0.87*pi", "2*pi/3", "1e-5".
double parse_scalar(std::string_view text);

// "start:end:count" (endpoints included) or a single scalar.
struct Range {
  double start = 0.0;
  double end = 0.0;
  long count = 1;

  std::vector<double> values() const;
};

Range parse_range(std::string_view text);

// Comma-separated scalars.
std::vector<double> parse_list(std::string_view text);

}  // namespace qbs::cli
