// Copyright 2026 The lcmc Authors
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

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace lcmc {

/// Shortest decimal string that round-trips to the same double. Output is
/// locale-independent, so CSV files are byte-stable across runs and hosts.
std::string format_number(double value);

/// Appends `value` formatted by format_number.
void append_number(std::string& out, double value);

/// Writes `contents` to `path`, creating parent directories as needed.
void write_text_file(const std::filesystem::path& path, std::string_view contents);

/// Minimal CSV builder: a header followed by rows of numbers or strings.
class CsvWriter {
 public:
  explicit CsvWriter(const std::vector<std::string>& header);

  CsvWriter& cell(double value);
  CsvWriter& cell(std::string_view value);
  CsvWriter& cell(long long value);
  void end_row();

  const std::string& str() const { return buffer_; }
  std::size_t rows() const { return rows_; }
  void save(const std::filesystem::path& path) const { write_text_file(path, buffer_); }

 private:
  void separator();

  std::string buffer_;
  bool row_open_ = false;
  std::size_t rows_ = 0;
};

}  // namespace lcmc
