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

// Layered key-value configuration.
//
// Text format (INI):
//
//   # comment
//   [section]
//   key = value
//
// Keys are addressed as "section.key". Later layers override earlier ones;
// command-line overrides use the same "section.key=value" form.

#ifndef QRC_CONFIG_HPP_
#define QRC_CONFIG_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace qrc {

class Config {
 public:
  static Config parse(const std::string& text, const std::string& source = "<string>");
  static Config load(const std::string& path);
  // Each file overrides the ones before it; a file may name parents with
  // "include = a.ini, b.ini" (paths relative to the including file).
  static Config load_layers(const std::vector<std::string>& paths);

  void merge(const Config& over);
  void set(const std::string& key, const std::string& value);
  void apply_override(const std::string& assignment);  // "section.key=value"

  bool has(const std::string& key) const { return values_.count(key) > 0; }
  const std::string& raw(const std::string& key) const;
  std::string get(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  long get_long(const std::string& key, long fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_doubles(const std::string& key, const std::vector<double>& fallback) const;
  std::vector<long> get_longs(const std::string& key, const std::vector<long>& fallback) const;

  const std::map<std::string, std::string>& values() const { return values_; }
  std::string to_ini() const;  // sorted, lossless for values set through set()

 private:
  std::map<std::string, std::string> values_;
};

std::vector<std::string> split_list(const std::string& s);

}  // namespace qrc

#endif  // QRC_CONFIG_HPP_
