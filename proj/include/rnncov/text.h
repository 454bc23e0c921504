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


// Locale-independent number formatting and tokenizing shared by the text
// file formats (traces, models, weights).

#ifndef RNNCOV_TEXT_H_
#define RNNCOV_TEXT_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace rnncov::text {

// 9 significant digits; exact round trip for float.
std::string FormatFloat(float v);
// Shortest representation that round-trips the double exactly.
std::string FormatDouble(double v);

// Each parser throws ParseError(line, ...) on malformed or non-finite input.
float ParseFloat(std::string_view token, std::size_t line);
double ParseDouble(std::string_view token, std::size_t line);
std::int64_t ParseInt(std::string_view token, std::size_t line);

// Splits on runs of ASCII spaces. Empty tokens are never returned.
std::vector<std::string_view> SplitSpaces(std::string_view s);

}  // namespace rnncov::text

#endif  // RNNCOV_TEXT_H_
