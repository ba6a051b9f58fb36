// Copyright 2026 The lexfuse Authors
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

#ifndef LEXFUSE_TEXT_H_
#define LEXFUSE_TEXT_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace lexfuse {

// Lowercases and splits on every non-alphanumeric code point. Letters of the
// Latin-1 and Latin Extended-A/B blocks count as alphanumeric so accented
// words stay whole; everything else (punctuation, dashes, symbols, invalid
// UTF-8) separates tokens. Digit-only tokens are kept.
std::vector<std::string> tokenize(std::string_view text);

// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

// Parses a complete decimal/scientific literal. Returns false on trailing
// garbage or an empty field; non-finite values parse successfully and must
// be rejected by the caller where required.
bool parse_double(std::string_view field, double& out);

// Splits on a single character, keeping empty fields.
std::vector<std::string_view> split(std::string_view line, char sep);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace lexfuse

#endif  // LEXFUSE_TEXT_H_
