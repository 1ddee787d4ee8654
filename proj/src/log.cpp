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

#include "dbfma/log.hpp"

#include <cstdlib>
#include <mutex>
#include <string>

namespace dbfma::log {

Level threshold() {
    static const Level level = [] {
        const char* env = std::getenv("DBF_LOG");
        if (env == nullptr) {
            return Level::warn;
        }
        const std::string v(env);
        if (v == "debug") {
            return Level::debug;
        }
        if (v == "info") {
            return Level::info;
        }
        return Level::warn;
    }();
    return level;
}

void write(Level level, std::string_view message) {
    static std::mutex mu;
    static constexpr const char* kNames[] = {"debug", "info", "warn", "error"};
    const std::lock_guard lock(mu);
    std::cerr << "[dbfma:" << kNames[static_cast<int>(level)] << "] " << message << '\n';
}

}  // namespace dbfma::log
