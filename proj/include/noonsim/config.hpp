#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

namespace noonsim {

// Complex literal: "1.5", "2.68i", "-i", "0.5+0.3i", "1e-2-3j".
std::complex<double> parse_complex(const std::string& text);

// Comma-separated doubles; an item of the form "lo:hi:step" expands to the
// inclusive arithmetic grid.
std::vector<double> parse_double_list(const std::string& text);

// Flat "key = value" configuration with dotted keys and '#' comments.
// Later assignments win. Values stay strings until a typed getter parses
// them, so the same file can feed several commands.
class Config {
 public:
  Config() = default;
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text);

  bool has(const std::string& key) const;
  void set(const std::string& key, const std::string& value);  // CLI override

  std::string get_string(const std::string& key, const std::string& def) const;
  double get_double(const std::string& key, double def) const;
  int get_int(const std::string& key, int def) const;
  bool get_bool(const std::string& key, bool def) const;
  std::complex<double> get_complex(const std::string& key,
                                   std::complex<double> def) const;
  std::vector<double> get_double_list(const std::string& key,
                                      const std::vector<double>& def) const;
  std::vector<std::string> get_string_list(
      const std::string& key, const std::vector<std::string>& def) const;

  // Rejects any present key that is not in the declared set; commands call
  // this with their full key vocabulary so typos fail fast.
  void require_known_keys(const std::vector<std::string>& declared) const;

 private:
  std::map<std::string, std::string> kv_;
};

}  // namespace noonsim
