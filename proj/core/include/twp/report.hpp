#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace twp {

// Shortest round-trip form, "%.17g".
std::string format_double(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string str() const;
};

// Writes dir/report.json and, when the table has a header, dir/report.csv.
void write_report(const std::string& dir, const nlohmann::json& report, const CsvTable& table);

}  // namespace twp
