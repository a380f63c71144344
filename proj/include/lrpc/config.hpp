#pragma once
// Flat key = value configuration files for the experiment harness.
//
//   # comment
//   images = ["a.ppm", "b.ppm"]
//   presets = ["Q1", "Q3"]
//   loss = ["uniform:0.1", "ge:0.378,0.883,0.810,0.938"]
//   trials = 20
//   seed = 7
//   budget = 900
//   progressive = true
//
// Values are strings (quoted), numbers, booleans, or arrays of strings.
// Unknown keys are an error, so typos fail loudly instead of silently
// running a different experiment.

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "lrpc/common.hpp"

namespace lrpc {

struct ConfigValue {
  std::string raw;                    // scalar as written, unquoted
  std::vector<std::string> list;      // filled when the value was an array
  bool is_list = false;
};

using ConfigMap = std::map<std::string, ConfigValue>;

namespace detail {

inline std::string strip(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

inline std::string unquote(const std::string& s, int line_no) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"')
    return s.substr(1, s.size() - 2);
  if (!s.empty() && (s.front() == '"' || s.back() == '"'))
    throw error("config line " + std::to_string(line_no) +
                ": unbalanced quotes");
  return s;
}

}  // namespace detail

inline ConfigMap parse_config(std::istream& in) {
  ConfigMap out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::strip(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw error("config line " + std::to_string(line_no) +
                  ": expected key = value");
    const std::string key = detail::strip(line.substr(0, eq));
    std::string value = detail::strip(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw error("config line " + std::to_string(line_no) +
                  ": empty key or value");
    ConfigValue cv;
    if (value.front() == '[') {
      if (value.back() != ']')
        throw error("config line " + std::to_string(line_no) +
                    ": unterminated array");
      cv.is_list = true;
      const std::string body = value.substr(1, value.size() - 2);
      // Split on commas outside quotes only: loss specs like
      // "ge:0.378,0.883,0.810,0.938" carry commas of their own.
      std::string item;
      bool quoted = false;
      for (std::size_t i = 0; i <= body.size(); ++i) {
        if (i == body.size() || (body[i] == ',' && !quoted)) {
          item = detail::strip(item);
          if (!item.empty()) cv.list.push_back(detail::unquote(item, line_no));
          item.clear();
        } else {
          if (body[i] == '"') quoted = !quoted;
          item += body[i];
        }
      }
      if (quoted)
        throw error("config line " + std::to_string(line_no) +
                    ": unbalanced quotes");
    } else {
      cv.raw = detail::unquote(value, line_no);
    }
    if (!out.emplace(key, std::move(cv)).second)
      throw error("config line " + std::to_string(line_no) +
                  ": duplicate key '" + key + "'");
  }
  return out;
}

inline ConfigMap parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error("cannot open config file " + path);
  return parse_config(in);
}

// Typed accessors; each erases the key so leftovers can be reported.
struct ConfigReader {
  ConfigMap map;

  bool has(const std::string& key) const { return map.count(key) != 0; }

  std::vector<std::string> take_list(const std::string& key,
                                     std::vector<std::string> fallback) {
    auto it = map.find(key);
    if (it == map.end()) return fallback;
    std::vector<std::string> out =
        it->second.is_list ? it->second.list
                           : std::vector<std::string>{it->second.raw};
    map.erase(it);
    return out;
  }

  std::string take_string(const std::string& key, std::string fallback) {
    auto it = map.find(key);
    if (it == map.end()) return fallback;
    if (it->second.is_list) throw error("config key '" + key + "' must be a scalar");
    std::string out = it->second.raw;
    map.erase(it);
    return out;
  }

  long take_int(const std::string& key, long fallback) {
    const std::string s = take_string(key, "");
    if (s.empty()) return fallback;
    std::size_t used = 0;
    long v = 0;
    try {
      v = std::stol(s, &used);
    } catch (const std::exception&) {
      throw error("config key '" + key + "' is not an integer");
    }
    if (used != s.size())
      throw error("config key '" + key + "' is not an integer");
    return v;
  }

  double take_double(const std::string& key, double fallback) {
    const std::string s = take_string(key, "");
    if (s.empty()) return fallback;
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw error("config key '" + key + "' is not a number");
    }
    if (used != s.size())
      throw error("config key '" + key + "' is not a number");
    return v;
  }

  bool take_bool(const std::string& key, bool fallback) {
    const std::string s = take_string(key, "");
    if (s.empty()) return fallback;
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
    throw error("config key '" + key + "' must be true or false");
  }

  void reject_leftovers() const {
    if (map.empty()) return;
    std::string keys;
    for (const auto& [k, v] : map) keys += (keys.empty() ? "" : ", ") + k;
    throw error("unknown config keys: " + keys);
  }
};

}  // namespace lrpc
