// Copyright 2026 The DBF-MA Authors
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

#pragma once

#include <iostream>
#include <sstream>
#include <string_view>

namespace dbfma::log {

enum class Level { debug = 0, info = 1, warn = 2, error = 3 };

/// Threshold read once from DBF_LOG (debug|info); defaults to warn.
Level threshold();

void write(Level level, std::string_view message);

template <typename... Args>
void emit(Level level, const Args&... args) {
    if (level < threshold()) {
        return;
    }
    std::ostringstream os;
    (os << ... << args);
    write(level, os.str());
}

template <typename... Args>
void debug(const Args&... args) { emit(Level::debug, args...); }
template <typename... Args>
void info(const Args&... args) { emit(Level::info, args...); }
template <typename... Args>
void warn(const Args&... args) { emit(Level::warn, args...); }
template <typename... Args>
void error(const Args&... args) { emit(Level::error, args...); }

}  // namespace dbfma::log
