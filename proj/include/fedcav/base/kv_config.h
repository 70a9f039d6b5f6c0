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

#ifndef FEDCAV_BASE_KV_CONFIG_H_
#define FEDCAV_BASE_KV_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fedcav {

// Sectioned key/value text used by scenario and run configuration files:
//
//   # comment
//   [section]
//   key = value          # trailing comments allowed
//   key = a, b, c        # lists are comma separated
//
// Keys may repeat; Get() returns the last occurrence, GetAll() every one.
// Keys before the first [section] header live in section "".
class KvFile {
 public:
  struct Entry {
    std::string section;
    std::string key;
    std::string value;
    int line = 0;
  };

  static KvFile Parse(std::string_view text,
                      std::filesystem::path base_dir = {});
  static KvFile Load(const std::filesystem::path& path);

  bool Has(std::string_view section, std::string_view key) const;
  std::optional<std::string> Get(std::string_view section,
                                 std::string_view key) const;
  std::vector<std::string> GetAll(std::string_view section,
                                  std::string_view key) const;

  std::string GetString(std::string_view section, std::string_view key,
                        std::string_view fallback) const;
  double GetDouble(std::string_view section, std::string_view key,
                   double fallback) const;
  std::int64_t GetInt(std::string_view section, std::string_view key,
                      std::int64_t fallback) const;
  std::uint64_t GetUint64(std::string_view section, std::string_view key,
                          std::uint64_t fallback) const;
  bool GetBool(std::string_view section, std::string_view key,
               bool fallback) const;
  std::vector<double> GetDoubleList(std::string_view section,
                                    std::string_view key,
                                    std::vector<double> fallback) const;
  std::vector<std::string> GetStringList(std::string_view section,
                                         std::string_view key) const;

  // Throws ConfigError naming the first key in `section` not in `known`.
  void RequireKnownKeys(std::string_view section,
                        std::initializer_list<std::string_view> known) const;
  bool HasSection(std::string_view section) const;

  // Order-preserving "section.key=value" dump, one entry per line.
  std::string Canonical() const;

  const std::vector<Entry>& entries() const { return entries_; }
  const std::filesystem::path& base_dir() const { return base_dir_; }
  // Resolves a relative path against the directory the file was loaded from.
  std::filesystem::path ResolvePath(std::string_view value) const;

 private:
  const Entry* Find(std::string_view section, std::string_view key) const;

  std::vector<Entry> entries_;
  std::vector<std::string> sections_;
  std::filesystem::path base_dir_;
};

std::vector<std::string> SplitList(std::string_view text);
std::string_view Trim(std::string_view text);

}  // namespace fedcav

#endif  // FEDCAV_BASE_KV_CONFIG_H_
