#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace almab {

/// Fixed 6-significant-digit rendering; the single formatter behind every
/// emitted artifact so reruns are byte-identical.
std::string format_number(double value);
std::string format_int(std::int64_t value);

/// Minimal CSV assembly: a schema comment line, a header, then rows.
class CsvBuilder {
 public:
  explicit CsvBuilder(std::string schema_tag, std::vector<std::string> header);

  void add_row(std::vector<std::string> cells);
  std::string str() const;
  std::size_t data_rows() const { return rows_.size(); }

 private:
  std::string schema_tag_;
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Write text to path, creating parent directories. Throws IoError.
void write_file(const std::filesystem::path& path, const std::string& text);

/// Read a whole file. Throws IoError.
std::string read_file(const std::filesystem::path& path);

/// Parse a CSV produced by CsvBuilder: comment lines (leading '#') are
/// skipped, first remaining line is the header.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;  // -1 when absent
};
CsvTable parse_csv(const std::string& text);

}  // namespace almab
