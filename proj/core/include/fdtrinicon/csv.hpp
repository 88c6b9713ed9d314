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

#ifndef FDTRINICON_CSV_HPP_
#define FDTRINICON_CSV_HPP_

#include <filesystem>
#include <string>
#include <vector>

namespace fdtrinicon {

// RFC 4180 quoting: fields containing comma, quote, CR or LF are quoted and
// embedded quotes doubled. Rows end with "\n".
std::string csv_escape(const std::string& field);
std::string csv_row(const std::vector<std::string>& fields);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  void add_row(std::vector<std::string> row);
  std::size_t num_rows() const { return rows_.size(); }
  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }

  std::string to_string() const;
  void save(const std::filesystem::path& path) const;

  // Parses what to_string produces (quoted fields included).
  static CsvTable parse(const std::string& text);
  static CsvTable load(const std::filesystem::path& path);

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

// Fixed-precision number formatting used in report columns.
std::string format_fixed(double v, int decimals);

}  // namespace fdtrinicon

#endif  // FDTRINICON_CSV_HPP_
