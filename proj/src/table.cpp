#include "pblab/cli/table.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <system_error>

#include "json.hpp"
#include "pblab/errors.hpp"

namespace pblab::cli {

namespace {

void require_finite(double value, const std::string& column) {
  if (!std::isfinite(value)) {
    throw NumericError("refusing to emit non-finite value in column \"" +
                       column + "\"");
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

Table::Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns_.size()) {
    throw DomainError("table row has " + std::to_string(row.size()) +
                      " cells, header has " + std::to_string(columns_.size()));
  }
  rows_.push_back(std::move(row));
}

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t c = 0; c < table.columns().size(); ++c) {
    if (c) out += ',';
    out += csv_field(table.columns()[c]);
  }
  out += '\n';
  for (const auto& row : table.rows()) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      if (const double* v = std::get_if<double>(&row[c])) {
        require_finite(*v, table.columns()[c]);
        out += format_double(*v);
      } else {
        out += csv_field(std::get<std::string>(row[c]));
      }
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const Table& table) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& row : table.rows()) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t c = 0; c < row.size(); ++c) {
      const std::string& name = table.columns()[c];
      if (const double* v = std::get_if<double>(&row[c])) {
        require_finite(*v, name);
        obj[name] = *v;
      } else {
        obj[name] = std::get<std::string>(row[c]);
      }
    }
    arr.push_back(std::move(obj));
  }
  return arr.dump(2) + "\n";
}

void write_atomic(const std::string& path, const std::string& bytes) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::system_error(errno, std::generic_category(), "open " + tmp);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
      std::remove(tmp.c_str());
      throw std::system_error(errno, std::generic_category(), "write " + tmp);
    }
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    const int err = errno;
    std::remove(tmp.c_str());
    throw std::system_error(err, std::generic_category(), "rename to " + path);
  }
}

}  // namespace pblab::cli
