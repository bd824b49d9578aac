#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "subsig/smallmat.hpp"

namespace subsig {

// Line-based `key = value` configuration. Angle lists are comma-separated
// radians; matrices are row-major with semicolon-separated rows. `#` starts
// a comment. Errors carry the offending line number.

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Config {
 public:
  static Config parse_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return parse(ss.str(), path);
  }

  static Config parse(const std::string& text, const std::string& origin = "<config>") {
    Config c;
    c.origin_ = origin;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
      ++lineno;
      std::string s = strip(line);
      if (s.empty() || s[0] == '#') continue;
      auto eq = s.find('=');
      if (eq == std::string::npos)
        throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected `key = value`");
      std::string key = strip(s.substr(0, eq));
      std::string val = strip(s.substr(eq + 1));
      if (key.empty())
        throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
      if (c.values_.count(key))
        throw ConfigError(origin + ":" + std::to_string(lineno) + ": duplicate key `" + key + "`");
      c.values_[key] = {val, lineno};
      c.order_.push_back(key);
    }
    return c;
  }

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::vector<std::string>& keys() const { return order_; }

  std::string get_string(const std::string& key) const { return entry(key).text; }

  long get_int(const std::string& key) const {
    const auto& e = entry(key);
    try {
      size_t pos = 0;
      long v = std::stol(e.text, &pos);
      if (pos != e.text.size()) throw std::invalid_argument("");
      return v;
    } catch (...) {
      throw ConfigError(where(key) + ": expected an integer, got `" + e.text + "`");
    }
  }

  double get_double(const std::string& key) const {
    const auto& e = entry(key);
    try {
      size_t pos = 0;
      double v = std::stod(e.text, &pos);
      if (pos != e.text.size()) throw std::invalid_argument("");
      return v;
    } catch (...) {
      throw ConfigError(where(key) + ": expected a number, got `" + e.text + "`");
    }
  }

  bool get_bool(const std::string& key) const {
    std::string v = entry(key).text;
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(where(key) + ": expected a boolean, got `" + v + "`");
  }

  std::vector<double> get_angles(const std::string& key) const {
    const auto& e = entry(key);
    std::vector<double> out;
    for (const std::string& tok : split(e.text, ',')) {
      std::string s = strip(tok);
      if (s.empty()) throw ConfigError(where(key) + ": empty entry in angle list");
      try {
        size_t pos = 0;
        out.push_back(std::stod(s, &pos));
        if (pos != s.size()) throw std::invalid_argument("");
      } catch (...) {
        throw ConfigError(where(key) + ": bad angle `" + s + "`");
      }
    }
    return out;
  }

  DMat get_matrix(const std::string& key) const {
    const auto& e = entry(key);
    std::vector<std::vector<double>> rows;
    for (const std::string& row : split(e.text, ';')) {
      std::vector<double> r;
      for (const std::string& tok : split(row, ',')) {
        std::string s = strip(tok);
        try {
          size_t pos = 0;
          r.push_back(std::stod(s, &pos));
          if (pos != s.size()) throw std::invalid_argument("");
        } catch (...) {
          throw ConfigError(where(key) + ": bad matrix entry `" + s + "`");
        }
      }
      rows.push_back(std::move(r));
    }
    if (rows.empty()) throw ConfigError(where(key) + ": empty matrix");
    size_t cols = rows[0].size();
    for (const auto& r : rows)
      if (r.size() != cols) throw ConfigError(where(key) + ": ragged matrix rows");
    DMat m(int(rows.size()), int(cols));
    for (size_t i = 0; i < rows.size(); ++i)
      for (size_t j = 0; j < cols; ++j) m(int(i), int(j)) = rows[i][j];
    return m;
  }

 private:
  struct Entry {
    std::string text;
    int line;
  };

  const Entry& entry(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError(origin_ + ": missing key `" + key + "`");
    return it->second;
  }
  std::string where(const std::string& key) const {
    auto it = values_.find(key);
    return origin_ + ":" + std::to_string(it->second.line);
  }

  static std::string strip(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  }
  static std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
      if (ch == sep) {
        out.push_back(cur);
        cur.clear();
      } else {
        cur += ch;
      }
    }
    out.push_back(cur);
    return out;
  }

  std::string origin_;
  std::map<std::string, Entry> values_;
  std::vector<std::string> order_;
};

}  // namespace subsig
