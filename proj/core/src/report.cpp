#include "twp/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "twp/error.hpp"

namespace twp {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string CsvTable::str() const {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      bool quote = cells[i].find_first_of(",\"\n") != std::string::npos;
      if (!quote) {
        out += cells[i];
        continue;
      }
      out += '"';
      for (char c : cells[i]) {
        if (c == '"') out += '"';
        out += c;
      }
      out += '"';
    }
    out += '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out;
}

void write_report(const std::string& dir, const nlohmann::json& report, const CsvTable& table) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory " + dir + ": " + ec.message());
  {
    std::ofstream out(std::filesystem::path(dir) / "report.json");
    if (!out) throw Error("cannot write report.json in " + dir);
    out << report.dump(2) << '\n';
  }
  if (table.header.empty()) return;
  std::ofstream out(std::filesystem::path(dir) / "report.csv");
  if (!out) throw Error("cannot write report.csv in " + dir);
  out << table.str();
}

}  // namespace twp
