#include "noonsim/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace noonsim {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_plain_double(const std::string& s, const std::string& what) {
  try {
    size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size())
      throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("cannot parse '" + s + "' as " + what);
  }
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, ',')) out.push_back(trim(cur));
  if (!s.empty() && s.back() == ',') out.push_back("");
  return out;
}

}  // namespace

std::complex<double> parse_complex(const std::string& text) {
  std::string s = trim(text);
  if (s.empty()) throw std::invalid_argument("empty complex literal");
  const char last = s.back();
  if (last != 'i' && last != 'j') {
    return {parse_plain_double(s, "a real number"), 0.0};
  }
  s.pop_back();
  // find the sign that separates real and imaginary parts: a '+'/'-' that
  // is neither leading nor an exponent sign
  size_t split = std::string::npos;
  for (size_t k = s.size(); k-- > 1;) {
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  if (split == std::string::npos) {
    std::string im = trim(s);
    if (im.empty() || im == "+") return {0.0, 1.0};
    if (im == "-") return {0.0, -1.0};
    return {0.0, parse_plain_double(im, "an imaginary part")};
  }
  const std::string re = trim(s.substr(0, split));
  std::string im = trim(s.substr(split));
  if (im == "+") im = "1";
  if (im == "-") im = "-1";
  return {parse_plain_double(re, "a real part"),
          parse_plain_double(im, "an imaginary part")};
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  for (const std::string& item : split_commas(text)) {
    if (item.empty())
      throw std::invalid_argument("empty item in list '" + text + "'");
    const auto c1 = item.find(':');
    if (c1 == std::string::npos) {
      out.push_back(parse_plain_double(item, "a list entry"));
      continue;
    }
    const auto c2 = item.find(':', c1 + 1);
    if (c2 == std::string::npos)
      throw std::invalid_argument("range '" + item +
                                  "' must be lo:hi:step");
    const double lo = parse_plain_double(trim(item.substr(0, c1)), "range lo");
    const double hi =
        parse_plain_double(trim(item.substr(c1 + 1, c2 - c1 - 1)), "range hi");
    const double step = parse_plain_double(trim(item.substr(c2 + 1)), "range step");
    if (!(step > 0.0) || hi < lo)
      throw std::invalid_argument("range '" + item +
                                  "' needs hi >= lo and step > 0");
    const int n = int(std::floor((hi - lo) / step + 1e-9)) + 1;
    for (int k = 0; k < n; ++k) out.push_back(lo + k * step);
  }
  return out;
}

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str());
}

Config Config::parse_string(const std::string& text) {
  Config c;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  " has no '='");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty())
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  " has an empty key");
    c.kv_[key] = trim(line.substr(eq + 1));
  }
  return c;
}

bool Config::has(const std::string& key) const { return kv_.count(key) > 0; }

void Config::set(const std::string& key, const std::string& value) {
  kv_[key] = value;
}

std::string Config::get_string(const std::string& key,
                               const std::string& def) const {
  const auto it = kv_.find(key);
  return it == kv_.end() ? def : it->second;
}

double Config::get_double(const std::string& key, double def) const {
  const auto it = kv_.find(key);
  return it == kv_.end() ? def
                         : parse_plain_double(it->second, "key " + key);
}

int Config::get_int(const std::string& key, int def) const {
  const auto it = kv_.find(key);
  if (it == kv_.end()) return def;
  const double v = parse_plain_double(it->second, "key " + key);
  const int i = int(std::lround(v));
  if (double(i) != v)
    throw std::invalid_argument("key " + key + " must be an integer");
  return i;
}

bool Config::get_bool(const std::string& key, bool def) const {
  const auto it = kv_.find(key);
  if (it == kv_.end()) return def;
  const std::string& v = it->second;
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::invalid_argument("key " + key + " must be a boolean");
}

std::complex<double> Config::get_complex(const std::string& key,
                                         std::complex<double> def) const {
  const auto it = kv_.find(key);
  return it == kv_.end() ? def : parse_complex(it->second);
}

std::vector<double> Config::get_double_list(
    const std::string& key, const std::vector<double>& def) const {
  const auto it = kv_.find(key);
  return it == kv_.end() ? def : parse_double_list(it->second);
}

std::vector<std::string> Config::get_string_list(
    const std::string& key, const std::vector<std::string>& def) const {
  const auto it = kv_.find(key);
  if (it == kv_.end()) return def;
  auto parts = split_commas(it->second);
  for (const auto& p : parts)
    if (p.empty())
      throw std::invalid_argument("empty item in list key " + key);
  return parts;
}

void Config::require_known_keys(
    const std::vector<std::string>& declared) const {
  for (const auto& [key, value] : kv_) {
    bool known = false;
    for (const auto& d : declared) {
      if (key == d) {
        known = true;
        break;
      }
    }
    if (!known) throw std::invalid_argument("unknown config key '" + key + "'");
  }
}

}  // namespace noonsim
