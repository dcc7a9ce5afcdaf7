/* Copyright 2026 The Forge Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#ifndef FORGE_TEXT_HPP_
#define FORGE_TEXT_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace forge {

// Decodes UTF-8 into code points. Invalid byte sequences decode to U+FFFD
// one byte at a time so that cleaning never throws on dirty metadata.
std::vector<char32_t> utf8_decode(std::string_view s);
std::string utf8_encode(const std::vector<char32_t>& cps);

// Punctuation per the blocks that actually occur in GUI metadata: ASCII and
// Latin-1 punctuation, general punctuation (U+2000..206F), CJK symbols
// (U+3000..303F), and the fullwidth ASCII-punctuation ranges.
bool is_punct_cp(char32_t cp);
bool is_space_cp(char32_t cp);

// ASCII plus Latin-1 lowercasing; other scripts pass through unchanged.
char32_t lower_cp(char32_t cp);

// Levenshtein distance over code points.
std::size_t levenshtein(std::string_view a, std::string_view b);

// 1 - distance / max(len); 1.0 when both are empty.
double edit_similarity(std::string_view a, std::string_view b);

// Lowercases and splits on whitespace.
std::vector<std::string> tokenize_lower(std::string_view s);

}  // namespace forge

#endif  // FORGE_TEXT_HPP_
