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

#include "lcmc/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "lcmc/error.hpp"

namespace lcmc {

void append_number(std::string& out, double value) {
  if (std::isnan(value)) {
    out += "nan";
    return;
  }
  if (std::isinf(value)) {
    out += value > 0 ? "inf" : "-inf";
    return;
  }
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  out.append(buf, res.ptr);
}

std::string format_number(double value) {
  std::string s;
  append_number(s, value);
  return s;
}

void write_text_file(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

CsvWriter::CsvWriter(const std::vector<std::string>& header) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) buffer_ += ',';
    buffer_ += header[i];
  }
  buffer_ += '\n';
}

void CsvWriter::separator() {
  if (row_open_) buffer_ += ',';
  row_open_ = true;
}

CsvWriter& CsvWriter::cell(double value) {
  separator();
  append_number(buffer_, value);
  return *this;
}

CsvWriter& CsvWriter::cell(std::string_view value) {
  separator();
  buffer_ += value;
  return *this;
}

CsvWriter& CsvWriter::cell(long long value) {
  separator();
  buffer_ += std::to_string(value);
  return *this;
}

void CsvWriter::end_row() {
  buffer_ += '\n';
  row_open_ = false;
  ++rows_;
}

}  // namespace lcmc
