// Copyright 2026 The srl-rewriter Authors.
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

#include "srlrw/tokenize.hpp"

#include <algorithm>

namespace srlrw {

namespace {

bool IsAsciiSpace(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

std::size_t CodePointLength(unsigned char lead) {
  if (lead < 0x80) return 1;
  if ((lead >> 5) == 0x6) return 2;
  if ((lead >> 4) == 0xE) return 3;
  if ((lead >> 3) == 0x1E) return 4;
  return 1;  // stray continuation byte; keep it as its own token
}

}  // namespace

TokenList SplitCharacters(std::string_view text) {
  TokenList out;
  std::size_t i = 0;
  while (i < text.size()) {
    const auto lead = static_cast<unsigned char>(text[i]);
    if (IsAsciiSpace(lead)) {
      ++i;
      continue;
    }
    const std::size_t n = std::min(CodePointLength(lead), text.size() - i);
    out.emplace_back(text.substr(i, n));
    i += n;
  }
  return out;
}

TokenList SplitWhitespace(std::string_view text) {
  TokenList out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && IsAsciiSpace(static_cast<unsigned char>(text[i]))) ++i;
    const std::size_t start = i;
    while (i < text.size() && !IsAsciiSpace(static_cast<unsigned char>(text[i]))) ++i;
    if (i > start) out.emplace_back(text.substr(start, i - start));
  }
  return out;
}

TokenList Tokenize(std::string_view text, Tokenization mode) {
  return mode == Tokenization::kCharacter ? SplitCharacters(text)
                                          : SplitWhitespace(text);
}

}  // namespace srlrw
