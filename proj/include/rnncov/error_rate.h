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

// Word and character error rates.

#ifndef RNNCOV_ERROR_RATE_H_
#define RNNCOV_ERROR_RATE_H_

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rnncov {

// Unit-cost Levenshtein distance, two-row table.
template <typename T>
std::size_t EditDistance(std::span<const T> ref, std::span<const T> hyp) {
  std::vector<std::size_t> prev(hyp.size() + 1), cur(hyp.size() + 1);
  for (std::size_t j = 0; j <= hyp.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= ref.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= hyp.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return prev[hyp.size()];
}

// Whitespace-separated words.
std::vector<std::string> SplitWords(std::string_view text);
// UTF-8 code points; bytes that do not start a valid sequence count as one
// character each.
std::vector<char32_t> SplitChars(std::string_view text);

// Throw ValidationError when the reference has no words (characters).
double WordErrorRate(std::string_view reference, std::string_view hypothesis);
double CharErrorRate(std::string_view reference, std::string_view hypothesis);

}  // namespace rnncov

#endif  // RNNCOV_ERROR_RATE_H_
