// Copyright 2026 The fdtrinicon Authors.
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

#ifndef FDTRINICON_KEYVALUE_HPP_
#define FDTRINICON_KEYVALUE_HPP_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fdtrinicon {

// Flat "key = value" text used for scenario, grid and diagnostics files.
// '#' starts a comment; blank lines are ignored; later keys override
// earlier ones. Lists are comma-separated.
class KeyValueFile {
 public:
  static KeyValueFile parse(const std::string& text,
                            const std::string& origin = "<string>");
  static KeyValueFile load(const std::filesystem::path& path);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::string& raw(const std::string& key) const;

  std::optional<std::string> get_string(const std::string& key) const;
  std::optional<double> get_double(const std::string& key) const;
  std::optional<long long> get_int(const std::string& key) const;
  std::optional<bool> get_bool(const std::string& key) const;
  std::optional<std::vector<double>> get_doubles(const std::string& key) const;
  std::optional<std::vector<std::string>> get_strings(
      const std::string& key) const;

  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, double value);
  void set(const std::string& key, const std::vector<double>& values);
  void set_int(const std::string& key, long long value);
  void set_bool(const std::string& key, bool value);
  void set_list(const std::string& key, const std::vector<std::string>& values);

  // Keys in first-seen order.
  std::vector<std::string> keys() const;
  std::string to_string() const;
  void save(const std::filesystem::path& path) const;

 private:
  std::map<std::string, std::string> values_;
  std::vector<std::string> order_;
  std::string origin_;
};

// Locale-independent number parsing; accepts "inf", "-inf".
double parse_double(const std::string& text, const std::string& what);
// Shortest round-trip formatting.
std::string format_double(double v);

}  // namespace fdtrinicon

#endif  // FDTRINICON_KEYVALUE_HPP_
