#include "almab/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "almab/errors.hpp"

namespace almab {

std::string format_number(double value) {
  if (!std::isfinite(value)) {
    throw NumericalError("format_number: non-finite value");
  }
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", value);
  return buf;
}

std::string format_int(std::int64_t value) { return std::to_string(value); }

CsvBuilder::CsvBuilder(std::string schema_tag, std::vector<std::string> header)
    : schema_tag_(std::move(schema_tag)), header_(std::move(header)) {}

void CsvBuilder::add_row(std::vector<std::string> cells) {
  if (cells.size() != header_.size()) {
    throw InputError("CsvBuilder: row width does not match header");
  }
  rows_.push_back(std::move(cells));
}

std::string CsvBuilder::str() const {
  std::string out = "# " + schema_tag_ + "\n";
  const auto join = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i > 0) out.push_back(',');
      out += cells[i];
    }
    out.push_back('\n');
  };
  join(header_);
  for (const auto& row : rows_) join(row);
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) {
      throw IoError("cannot create directory " + path.parent_path().string() +
                    ": " + ec.message());
    }
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  return -1;
}

CsvTable parse_csv(const std::string& text) {
  CsvTable table;
  std::istringstream in(text);
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    if (!have_header) {
      table.header = std::move(cells);
      have_header = true;
    } else {
      table.rows.push_back(std::move(cells));
    }
  }
  return table;
}

}  // namespace almab
