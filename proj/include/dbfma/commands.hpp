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

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "dbfma/config.hpp"
#include "dbfma/report.hpp"
#include "dbfma/track.hpp"
#include "dbfma/track_gen.hpp"

namespace dbfma {

/// Exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitInfeasible = 2;

/// Config file, or defaults when absent.
RunConfig resolve_config(const std::optional<std::filesystem::path>& path);

/// The configured tracks, or a generated oval and chicane when none are listed.
std::vector<TrackModel> resolve_tracks(const RunConfig& cfg);

struct PlanArgs {
    std::optional<std::filesystem::path> config;
    /// Track manifest; defaults to the first configured track.
    std::optional<std::filesystem::path> track;
    /// x, y, vx, vy
    std::array<double, 4> ego{};
    std::array<double, 4> target{};
    std::optional<std::uint64_t> seed;
    std::filesystem::path out = ".";
};

/// Writes out/trajectory.csv (t,x,y,vx,vy,ax,ay at 100 Hz) and prints the
/// likelihood breakdown. 0 on a trajectory, 2 when infeasible, 1 on errors.
int cmd_plan(const PlanArgs& args, std::ostream& out, std::ostream& err);

struct SimulateArgs {
    std::optional<std::filesystem::path> config;
    std::optional<std::uint64_t> seed;
    std::optional<std::filesystem::path> out;
    std::optional<std::size_t> jobs;
    bool traces = false;
};

struct SimulationRun {
    SuiteReport report;
    /// Sorted by scenario index.
    std::vector<ResultRecord> records;
    std::size_t resumed = 0;
};

/// Runs the suite with a bounded worker pool. Scenarios whose result file
/// already exists in cfg.output_dir are read back instead of rerun.
SimulationRun run_simulation(const RunConfig& cfg, bool traces, std::ostream* progress = nullptr);

int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err);

struct GenTrackArgs {
    std::optional<std::filesystem::path> config;
    std::string kind = "oval";
    std::optional<std::string> name;
    std::optional<double> straight_length;
    std::optional<double> radius;
    std::optional<double> width;
    std::optional<double> v_cap;
    std::filesystem::path out = ".";
};

int cmd_gen_track(const GenTrackArgs& args, std::ostream& out, std::ostream& err);

/// Rebuilds the report from raw result files in dir; also writes dir/report.csv.
/// 1 when the directory holds no results or any file is corrupt.
int cmd_report(const std::filesystem::path& dir, std::ostream& out, std::ostream& err);

}  // namespace dbfma
