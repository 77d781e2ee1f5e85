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

#ifndef SRLRW_TOKENIZE_HPP_
#define SRLRW_TOKENIZE_HPP_

#include <string_view>

#include "srlrw/core_types.hpp"

namespace srlrw {

enum class Tokenization { kCharacter, kWhitespace };

// Splits UTF-8 text into one token per code point, dropping ASCII whitespace.
TokenList SplitCharacters(std::string_view text);

TokenList SplitWhitespace(std::string_view text);

TokenList Tokenize(std::string_view text, Tokenization mode);

}  // namespace srlrw

#endif  // SRLRW_TOKENIZE_HPP_
