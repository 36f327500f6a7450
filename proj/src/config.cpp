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

#include "lcmc/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "lcmc/error.hpp"

namespace lcmc::config {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<Entry> parse(std::string_view text) {
  std::vector<Entry> out;
  std::set<std::string> seen;
  int lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineno;
    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'key = value', got '" + line + "'", lineno, "");
    Entry e{trim(std::string_view(line).substr(0, eq)), trim(std::string_view(line).substr(eq + 1)), lineno};
    if (e.key.empty()) throw ParseError("missing key before '='", lineno, "");
    if (!seen.insert(e.key).second) throw ParseError("duplicate key '" + e.key + "'", lineno, e.key);
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<Entry> parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

namespace {

[[noreturn]] void bad(const Entry& e, const std::string& expected) {
  throw ParseError("key '" + e.key + "': expected " + expected + ", got '" + e.value + "'", e.line, e.key);
}

template <typename T>
bool parse_number(const std::string& s, T& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  const auto res = std::from_chars(first, last, out);
  return res.ec == std::errc() && res.ptr == last && first != last;
}

}  // namespace

double to_double(const Entry& e) {
  double v = 0.0;
  if (!parse_number(e.value, v)) bad(e, "a number");
  return v;
}

long long to_int(const Entry& e) {
  long long v = 0;
  if (!parse_number(e.value, v)) bad(e, "an integer");
  return v;
}

std::uint64_t to_uint64(const Entry& e) {
  std::uint64_t v = 0;
  if (!parse_number(e.value, v)) bad(e, "a non-negative integer");
  return v;
}

bool to_bool(const Entry& e) {
  std::string v = e.value;
  for (char& c : v) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  bad(e, "a boolean");
}

std::vector<std::string> to_list(const Entry& e) {
  std::vector<std::string> out;
  if (trim(e.value).empty()) return out;
  std::size_t pos = 0;
  for (;;) {
    const auto comma = e.value.find(',', pos);
    std::string item = trim(std::string_view(e.value).substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
    if (item.empty()) bad(e, "a comma separated list without empty items");
    out.push_back(std::move(item));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::vector<double> to_double_list(const Entry& e) {
  std::vector<double> out;
  for (const auto& item : to_list(e)) {
    double v = 0.0;
    if (!parse_number(item, v)) bad(e, "a list of numbers");
    out.push_back(v);
  }
  return out;
}

std::vector<int> to_int_list(const Entry& e) {
  std::vector<int> out;
  for (const auto& item : to_list(e)) {
    int v = 0;
    if (!parse_number(item, v)) bad(e, "a list of integers");
    out.push_back(v);
  }
  return out;
}

}  // namespace lcmc::config
