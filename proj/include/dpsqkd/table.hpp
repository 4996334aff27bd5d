#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace dpsqkd {

// monostate renders as an empty CSV field and a JSON null.
using Cell = std::variant<std::monostate, double, std::int64_t, bool, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
};

// Header line, then one line per row; doubles at 17 significant digits.
void write_csv(std::ostream& os, const Table& t);

// {"config": ..., "rows": [{column: value, ...}, ...]}
void write_json(std::ostream& os, const Table& t, const nlohmann::ordered_json& config);

std::string format_double(double v);

}  // namespace dpsqkd
