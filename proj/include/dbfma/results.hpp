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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dbfma/race_sim.hpp"

namespace dbfma {

/// Per-scenario record as persisted. Wall-clock plan times live in a sidecar
/// so that the main file is reproducible byte for byte.
struct ResultRecord {
    Scenario scenario;
    /// Empty when the scenario ran to completion.
    std::string error;
    bool success = false;
    bool collided = false;
    bool timed_out = false;
    double dvs = 0.0;
    double dvs_max = 0.0;
    double clamp_residual = 0.0;
    double cte = 0.0;
    std::optional<double> tto;
    double end_time = 0.0;
    double final_lead = 0.0;
    std::size_t plans_attempted = 0;
    std::size_t plans_feasible = 0;
    std::vector<double> plan_products;
    std::vector<double> plan_times;

    static ResultRecord from(const Scenario& sc, const ScenarioResult& r);
    static ResultRecord failed(const Scenario& sc, std::string error);
};

/// "<seed>_<index:04>.json"
std::string result_filename(std::uint64_t suite_seed, std::size_t index);
std::filesystem::path timing_path(const std::filesystem::path& result);

nlohmann::json record_to_json(const ResultRecord& rec, const nlohmann::json& config_echo);
/// Throws std::runtime_error on missing or mistyped fields.
ResultRecord record_from_json(const nlohmann::json& doc);

/// Writes the result and its timing sidecar via temp file + rename.
void write_record(const std::filesystem::path& dir, std::uint64_t suite_seed, const ResultRecord& rec,
                  const nlohmann::json& config_echo);

/// Reads a result file plus its sidecar when present. Throws std::runtime_error.
ResultRecord read_record(const std::filesystem::path& path);

/// Trace CSV: t,ego_x,ego_y,ego_vx,ego_vy,tgt_x,tgt_y,tgt_vx,tgt_vy,plan_id
void write_trace_csv(const std::filesystem::path& path, const std::vector<TraceRow>& trace);

/// Writes text to path through a temp file and rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& text);

}  // namespace dbfma
