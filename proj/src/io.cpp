#include "noonsim/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace noonsim::io {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string render_cell(const json& cell) {
  if (cell.is_string()) return csv_escape(cell.get<std::string>());
  if (cell.is_number_float()) return format_double(cell.get<double>());
  return cell.dump();
}

}  // namespace

void write_records(const std::string& path, const std::string& format,
                   const Table& t) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write to " + path);
  if (format == "csv") {
    for (size_t i = 0; i < t.columns.size(); ++i) {
      if (i) out << ',';
      out << csv_escape(t.columns[i]);
    }
    out << '\n';
    for (const auto& row : t.rows) {
      if (row.size() != t.columns.size())
        throw std::invalid_argument("record width does not match header");
      for (size_t i = 0; i < row.size(); ++i) {
        if (i) out << ',';
        out << render_cell(row[i]);
      }
      out << '\n';
    }
  } else if (format == "json") {
    json arr = json::array();
    for (const auto& row : t.rows) {
      if (row.size() != t.columns.size())
        throw std::invalid_argument("record width does not match header");
      json obj;
      for (size_t i = 0; i < row.size(); ++i) obj[t.columns[i]] = row[i];
      arr.push_back(std::move(obj));
    }
    out << arr.dump(2) << '\n';
  } else {
    throw std::invalid_argument("format must be csv or json, got '" + format +
                                "'");
  }
  if (!out) throw std::runtime_error("write failed for " + path);
}

void write_meta(const std::string& out_path, const json& meta) {
  const std::string path = out_path + ".meta.json";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write to " + path);
  out << meta.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace noonsim::io
