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

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dbfma/race_sim.hpp"

namespace dbfma {

inline constexpr int kConfigVersion = 1;

/// Fully resolved run configuration. Unit conversions (mph, g) happen in the
/// JSON layer only.
struct RunConfig {
    PlannerSetup setup;
    SimConfig sim;
    SuiteSpec suite;
    /// Track manifests, absolute or relative to the config file.
    std::vector<std::filesystem::path> tracks;
    std::filesystem::path output_dir = "results";
    std::size_t jobs = 1;

    /// Throws ConfigError when any section violates its invariants.
    void validate() const;
};

/// Parses a config document. Missing keys take defaults; unknown keys and a
/// wrong version are rejected. Relative paths resolve against base_dir.
RunConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});

/// Reads and parses a config file; throws ConfigError.
RunConfig load_config(const std::filesystem::path& path);

/// The resolved config as a document that parse_config accepts.
nlohmann::json config_to_json(const RunConfig& cfg);

}  // namespace dbfma
