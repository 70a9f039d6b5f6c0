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

#include "fedcav/base/kv_config.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "fedcav/base/error.h"

namespace fedcav {

std::string_view Trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  return text.substr(first, last - first + 1);
}

std::vector<std::string> SplitList(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto piece =
        Trim(text.substr(start, comma == std::string_view::npos
                                    ? std::string_view::npos
                                    : comma - start));
    if (!piece.empty()) out.emplace_back(piece);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

KvFile KvFile::Parse(std::string_view text, std::filesystem::path base_dir) {
  KvFile file;
  file.base_dir_ = std::move(base_dir);
  file.sections_.emplace_back();
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = Trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        throw ParseError("malformed section header '" + std::string(line) + "'",
                         line_no);
      }
      section = std::string(Trim(line.substr(1, line.size() - 2)));
      if (std::find(file.sections_.begin(), file.sections_.end(), section) ==
          file.sections_.end()) {
        file.sections_.push_back(section);
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError("expected 'key = value', got '" + std::string(line) + "'",
                       line_no);
    }
    const auto key = Trim(line.substr(0, eq));
    if (key.empty()) throw ParseError("empty key", line_no);
    file.entries_.push_back(
        {section, std::string(key), std::string(Trim(line.substr(eq + 1))),
         line_no});
  }
  return file;
}

KvFile KvFile::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return Parse(buffer.str(), path.parent_path());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": ", e);
  }
}

const KvFile::Entry* KvFile::Find(std::string_view section,
                                  std::string_view key) const {
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
    if (it->section == section && it->key == key) return &*it;
  }
  return nullptr;
}

bool KvFile::Has(std::string_view section, std::string_view key) const {
  return Find(section, key) != nullptr;
}

bool KvFile::HasSection(std::string_view section) const {
  return std::find(sections_.begin(), sections_.end(), section) !=
         sections_.end();
}

std::optional<std::string> KvFile::Get(std::string_view section,
                                       std::string_view key) const {
  if (const Entry* e = Find(section, key)) return e->value;
  return std::nullopt;
}

std::vector<std::string> KvFile::GetAll(std::string_view section,
                                        std::string_view key) const {
  std::vector<std::string> out;
  for (const auto& e : entries_) {
    if (e.section == section && e.key == key) out.push_back(e.value);
  }
  return out;
}

std::string KvFile::GetString(std::string_view section, std::string_view key,
                              std::string_view fallback) const {
  if (const Entry* e = Find(section, key)) return e->value;
  return std::string(fallback);
}

namespace {

std::string Where(const KvFile::Entry& e) {
  return "[" + e.section + "] " + e.key + " (line " + std::to_string(e.line) +
         ")";
}

template <typename T>
T ParseNumber(const KvFile::Entry& e, std::string_view text) {
  T value{};
  const char* begin = text.data();
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError(Where(e) + ": invalid number '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

double KvFile::GetDouble(std::string_view section, std::string_view key,
                         double fallback) const {
  const Entry* e = Find(section, key);
  return e ? ParseNumber<double>(*e, e->value) : fallback;
}

std::int64_t KvFile::GetInt(std::string_view section, std::string_view key,
                            std::int64_t fallback) const {
  const Entry* e = Find(section, key);
  return e ? ParseNumber<std::int64_t>(*e, e->value) : fallback;
}

std::uint64_t KvFile::GetUint64(std::string_view section, std::string_view key,
                                std::uint64_t fallback) const {
  const Entry* e = Find(section, key);
  return e ? ParseNumber<std::uint64_t>(*e, e->value) : fallback;
}

bool KvFile::GetBool(std::string_view section, std::string_view key,
                     bool fallback) const {
  const Entry* e = Find(section, key);
  if (!e) return fallback;
  if (e->value == "true" || e->value == "1" || e->value == "yes") return true;
  if (e->value == "false" || e->value == "0" || e->value == "no") return false;
  throw ConfigError(Where(*e) + ": expected true/false, got '" + e->value + "'");
}

std::vector<double> KvFile::GetDoubleList(std::string_view section,
                                          std::string_view key,
                                          std::vector<double> fallback) const {
  const Entry* e = Find(section, key);
  if (!e) return fallback;
  std::vector<double> out;
  for (const auto& item : SplitList(e->value)) {
    out.push_back(ParseNumber<double>(*e, item));
  }
  return out;
}

std::vector<std::string> KvFile::GetStringList(std::string_view section,
                                               std::string_view key) const {
  const Entry* e = Find(section, key);
  return e ? SplitList(e->value) : std::vector<std::string>{};
}

void KvFile::RequireKnownKeys(
    std::string_view section,
    std::initializer_list<std::string_view> known) const {
  for (const auto& e : entries_) {
    if (e.section != section) continue;
    if (std::find(known.begin(), known.end(), e.key) == known.end()) {
      throw ConfigError("unknown key " + Where(e));
    }
  }
}

std::string KvFile::Canonical() const {
  std::string out;
  for (const auto& e : entries_) {
    out += e.section + "." + e.key + "=" + e.value + "\n";
  }
  return out;
}

std::filesystem::path KvFile::ResolvePath(std::string_view value) const {
  std::filesystem::path p{std::string(value)};
  if (p.is_absolute() || base_dir_.empty()) return p;
  return base_dir_ / p;
}

}  // namespace fedcav
