#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace qbs::cli {

using Cell = std::variant<std::monostate, double, std::string>;

struct RowError {
  std::size_t row;
  std::string message;
};

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<RowError> errors;
};

std::string format_number(double v);

void write_csv(std::ostream& os, const Table& t);
// {"rows": [...], "manifest": manifest}; NaN and missing cells become null.
void write_json(std::ostream& os, const Table& t, const nlohmann::ordered_json& manifest);

}  // namespace qbs::cli
