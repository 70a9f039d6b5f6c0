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

#ifndef FEDCAV_BASE_LOG_H_
#define FEDCAV_BASE_LOG_H_

#include <string_view>

namespace fedcav {

enum class LogLevel { kError = 0, kWarn = 1, kInfo = 2, kDebug = 3 };

// Threshold comes from FEDCAV_LOG (error|warn|info|debug), default warn.
LogLevel CurrentLogLevel();
void SetLogLevel(LogLevel level);

// Writes "[level] message" to stderr when level <= threshold.
void Log(LogLevel level, std::string_view message);

}  // namespace fedcav

#endif  // FEDCAV_BASE_LOG_H_
