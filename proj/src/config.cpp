// Copyright 2026 The QRC Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qrc/config.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "qrc/types.hpp"

namespace qrc {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void load_recursive(const std::filesystem::path& path, Config& out, std::set<std::string>& stack) {
  std::string key = std::filesystem::weakly_canonical(path).string();
  if (stack.count(key)) throw ParseError("config include cycle at " + path.string(), 0);
  stack.insert(key);
  Config layer = Config::load(path.string());
  if (layer.has("include")) {
    for (const auto& parent : split_list(layer.raw("include")))
      load_recursive(path.parent_path() / parent, out, stack);
  }
  Config own;
  for (const auto& [k, v] : layer.values())
    if (k != "include") own.set(k, v);
  out.merge(own);
  stack.erase(key);
}

}  // namespace

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

Config Config::parse(const std::string& text, const std::string& source) {
  boost::property_tree::ptree tree;
  std::istringstream in(text);
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ParseError(source + ": " + e.message(), static_cast<int>(e.line()));
  }
  Config c;
  for (const auto& [section, node] : tree) {
    if (node.empty()) {
      c.set(section, trim(node.data()));
      continue;
    }
    for (const auto& [key, leaf] : node) {
      if (!leaf.empty()) throw ParseError(source + ": nested key under [" + section + "]", 0);
      c.set(section + "." + key, trim(leaf.data()));
    }
  }
  return c;
}

Config Config::load(const std::string& path) { return parse(read_file(path), path); }

Config Config::load_layers(const std::vector<std::string>& paths) {
  Config out;
  for (const auto& p : paths) {
    std::set<std::string> stack;
    load_recursive(p, out, stack);
  }
  return out;
}

void Config::merge(const Config& over) {
  for (const auto& [k, v] : over.values_) values_[k] = v;
}

void Config::set(const std::string& key, const std::string& value) {
  if (key.empty()) throw std::invalid_argument("config: empty key");
  values_[key] = value;
}

void Config::apply_override(const std::string& assignment) {
  auto eq = assignment.find('=');
  if (eq == std::string::npos) throw std::invalid_argument("override must be key=value: '" + assignment + "'");
  set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

const std::string& Config::raw(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw std::out_of_range("config key not set: " + key);
  return it->second;
}

std::string Config::get(const std::string& key, const std::string& fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
  if (!has(key)) return fallback;
  const std::string& s = raw(key);
  std::size_t used = 0;
  double v;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw std::invalid_argument("config " + key + ": not a number: '" + s + "'");
  return v;
}

long Config::get_long(const std::string& key, long fallback) const {
  if (!has(key)) return fallback;
  double v = get_double(key, 0.0);
  if (v != static_cast<double>(static_cast<long>(v)))
    throw std::invalid_argument("config " + key + ": not an integer: '" + raw(key) + "'");
  return static_cast<long>(v);
}

std::uint64_t Config::get_u64(const std::string& key, std::uint64_t fallback) const {
  if (!has(key)) return fallback;
  const std::string& s = raw(key);
  std::size_t used = 0;
  std::uint64_t v = 0;
  try {
    v = std::stoull(s, &used, 0);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size() || s[0] == '-')
    throw std::invalid_argument("config " + key + ": not an unsigned integer: '" + s + "'");
  return v;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  std::string s = raw(key);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "1" || s == "true" || s == "yes" || s == "on") return true;
  if (s == "0" || s == "false" || s == "no" || s == "off") return false;
  throw std::invalid_argument("config " + key + ": not a boolean: '" + raw(key) + "'");
}

std::vector<double> Config::get_doubles(const std::string& key, const std::vector<double>& fallback) const {
  if (!has(key)) return fallback;
  std::vector<double> out;
  Config tmp;
  for (const auto& item : split_list(raw(key))) {
    tmp.set("v", item);
    out.push_back(tmp.get_double("v", 0.0));
  }
  return out;
}

std::vector<long> Config::get_longs(const std::string& key, const std::vector<long>& fallback) const {
  if (!has(key)) return fallback;
  std::vector<long> out;
  Config tmp;
  for (const auto& item : split_list(raw(key))) {
    tmp.set("v", item);
    out.push_back(tmp.get_long("v", 0));
  }
  return out;
}

std::string Config::to_ini() const {
  std::ostringstream os;
  for (const auto& [k, v] : values_)
    if (k.find('.') == std::string::npos) os << k << " = " << v << "\n";
  std::string current;
  for (const auto& [k, v] : values_) {
    auto dot = k.find('.');
    if (dot == std::string::npos) continue;
    std::string section = k.substr(0, dot);
    if (section != current) {
      if (os.tellp() > 0) os << "\n";
      os << "[" << section << "]\n";
      current = section;
    }
    os << k.substr(dot + 1) << " = " << v << "\n";
  }
  return os.str();
}

}  // namespace qrc
