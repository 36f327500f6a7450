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

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace lcmc::config {

/// One `key = value` line of a config file.
struct Entry {
  std::string key;
  std::string value;
  int line = 0;
};

/// Parses the flat config format: one `key = value` per line, `#` starts a
/// comment, blank lines are ignored, list values are comma separated.
/// Duplicate keys and lines without `=` raise ParseError with the line number.
std::vector<Entry> parse(std::string_view text);
std::vector<Entry> parse_file(const std::string& path);

double to_double(const Entry& e);
long long to_int(const Entry& e);
std::uint64_t to_uint64(const Entry& e);
bool to_bool(const Entry& e);
std::vector<std::string> to_list(const Entry& e);
std::vector<double> to_double_list(const Entry& e);
std::vector<int> to_int_list(const Entry& e);

std::string trim(std::string_view s);

}  // namespace lcmc::config
