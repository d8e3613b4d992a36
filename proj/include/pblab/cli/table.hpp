#pragma once

#include <string>
#include <variant>
#include <vector>

namespace pblab::cli {

using Cell = std::variant<double, std::string>;

/// Rectangular table of named columns.
class Table {
 public:
  explicit Table(std::vector<std::string> columns);

  /// Throws DomainError when the row width differs from the header.
  void add_row(std::vector<Cell> row);

  const std::vector<std::string>& columns() const noexcept { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const noexcept { return rows_; }

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

/// Shortest decimal string that parses back to the same double.
std::string format_double(double value);

/// Header row then one line per row, `\n` terminated. Strings containing a
/// comma, quote or newline are quoted. Throws NumericError on NaN or inf.
std::string to_csv(const Table& table);

/// Array of objects, keys in column order. Throws NumericError on NaN or inf.
std::string to_json(const Table& table);

/// Writes bytes to `path` via a sibling temp file and rename.
void write_atomic(const std::string& path, const std::string& bytes);

}  // namespace pblab::cli
