#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace dwlab {

/// Shortest text that survives the double round trip ("%.17g").
std::string format_double(double x);

/// Builds CSV text; fields are written verbatim (no quoting is ever needed by
/// the numeric / identifier columns used here).
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);

  CsvWriter& row(const std::vector<std::string>& fields);
  const std::string& text() const { return text_; }
  std::size_t columns() const { return columns_; }

 private:
  std::size_t columns_;
  std::string text_;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of a column; throws std::runtime_error if absent.
  std::size_t column(std::string_view name) const;
  std::vector<double> numeric_column(std::string_view name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

/// Writes to a temporary sibling and renames it over `path`.
void write_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace dwlab
