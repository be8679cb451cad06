#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace noonsim::io {

using json = nlohmann::ordered_json;

// %.17g: shortest fixed format that round-trips a double exactly.
std::string format_double(double v);

// Rectangular record set. Cells carry their natural JSON type; the CSV
// writer renders doubles through format_double and escapes strings.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;
};

// format is "csv" or "json" (array of objects). Unknown formats throw.
void write_records(const std::string& path, const std::string& format,
                   const Table& t);

// Provenance sidecar, written as <out_path>.meta.json. Contains no
// timestamps: reruns of the same command must be byte-identical.
void write_meta(const std::string& out_path, const json& meta);

}  // namespace noonsim::io
