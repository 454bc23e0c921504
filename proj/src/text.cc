// Copyright 2026 The rnncov Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "rnncov/text.h"

#include <charconv>
#include <cmath>
#include <system_error>

#include "rnncov/error.h"

namespace rnncov::text {

std::string FormatFloat(float v) {
  char buf[48];
  auto res = std::to_chars(buf, buf + sizeof(buf), v,
                           std::chars_format::general, 9);
  return std::string(buf, res.ptr);
}

std::string FormatDouble(double v) {
  char buf[48];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

template <typename T>
T ParseReal(std::string_view token, std::size_t line) {
  T value{};
  const char* first = token.data();
  const char* last = token.data() + token.size();
  // from_chars rejects a leading '+', which is still a valid decimal.
  if (first != last && *first == '+') ++first;
  auto res = std::from_chars(first, last, value, std::chars_format::general);
  if (res.ec != std::errc() || res.ptr != last || token.empty()) {
    throw ParseError(line, "invalid number '" + std::string(token) + "'");
  }
  if (!std::isfinite(value)) {
    throw ParseError(line, "non-finite number '" + std::string(token) + "'");
  }
  return value;
}

}  // namespace

float ParseFloat(std::string_view token, std::size_t line) {
  return ParseReal<float>(token, line);
}

double ParseDouble(std::string_view token, std::size_t line) {
  return ParseReal<double>(token, line);
}

std::int64_t ParseInt(std::string_view token, std::size_t line) {
  std::int64_t value = 0;
  auto res = std::from_chars(token.data(), token.data() + token.size(), value);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size() ||
      token.empty()) {
    throw ParseError(line, "invalid integer '" + std::string(token) + "'");
  }
  return value;
}

std::vector<std::string_view> SplitSpaces(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && s[i] == ' ') ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace rnncov::text
