#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "cli/ranges.hpp"
#include "cli/table.hpp"

namespace qbs::cli {

class NumericAbort : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Resolved option strings (command line > config file > defaults).
struct Options {
  std::map<std::string, std::string> values;
  bool hz = false;
  double gamma_hz = 1.0;

  const std::string& str(const std::string& key) const;
  double num(const std::string& key) const { return parse_scalar(str(key)); }
  // Frequency in Gamma units (converted from Hz when --units hz).
  double freq(const std::string& key) const;
  std::vector<double> grid(const std::string& key) const { return parse_range(str(key)).values(); }
  std::vector<double> freq_grid(const std::string& key) const;
  long integer(const std::string& key) const;
  bool flag(const std::string& key) const;
};

struct RunContext {
  int jobs = 1;
  bool strict = false;
};

struct OptionSpec {
  std::string name;
  std::string fallback;
  std::string help;
};

struct CommandSpec {
  std::string name;
  std::string help;
  std::vector<OptionSpec> options;
  std::function<Table(const Options&, const RunContext&)> run;
};

const std::vector<CommandSpec>& command_specs();

}  // namespace qbs::cli
