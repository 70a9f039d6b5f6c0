// Copyright 2026 The FedCAV Authors. All rights reserved.
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

#ifndef FEDCAV_BASE_FORMAT_H_
#define FEDCAV_BASE_FORMAT_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace fedcav {

// Shortest decimal text that parses back to the same double; "nan", "inf"
// and "-inf" for non-finite values.
std::string FormatDouble(double value);

// Inverse of FormatDouble. Throws ParseError on malformed text.
double ParseDouble(std::string_view text);

// RFC 4180 field: quoted when it holds a comma, quote, CR or LF.
std::string CsvField(std::string_view text);

// Splits CSV text into records of unquoted fields. Throws ParseError on an
// unterminated quoted field.
std::vector<std::vector<std::string>> ParseCsv(std::string_view text);

// Writes `text` to `path` through a temporary file and a rename, creating
// parent directories. Throws Error on I/O failure.
void WriteTextFile(const std::filesystem::path& path, const std::string& text);

// Whole file as a string. Throws Error when it cannot be read.
std::string ReadTextFile(const std::filesystem::path& path);

}  // namespace fedcav

#endif  // FEDCAV_BASE_FORMAT_H_
