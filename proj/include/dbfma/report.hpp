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
#include <ostream>
#include <string>
#include <vector>

#include "dbfma/results.hpp"

namespace dbfma {

/// One row of the suite table. Means over all scenarios in the row except
/// tto (successful runs only) and plan time (every plan call).
struct ReportRow {
    std::string label;
    std::size_t scenarios = 0;
    std::size_t successes = 0;
    std::size_t collisions = 0;
    std::size_t errors = 0;
    double dvs = 0.0;
    double cte = 0.0;
    std::optional<double> tto;
    std::size_t plan_calls = 0;
    double plan_time_mean = 0.0;
    double plan_time_std = 0.0;
    double min_plan_product = 1.0;

    friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

/// Rows grouped by target speed scale (ascending), then "All".
struct SuiteReport {
    std::vector<ReportRow> rows;

    [[nodiscard]] const ReportRow& all() const { return rows.back(); }
    friend bool operator==(const SuiteReport&, const SuiteReport&) = default;
};

SuiteReport build_report(const std::vector<ResultRecord>& records);

void print_report(std::ostream& out, const SuiteReport& report);
std::string report_csv(const SuiteReport& report);

struct LoadedResults {
    std::vector<ResultRecord> records;
    /// Files that failed to parse, with the reason.
    std::vector<std::pair<std::filesystem::path, std::string>> corrupt;
};

/// Reads every "<seed>_<index>.json" in dir, sorted by file name.
LoadedResults load_results(const std::filesystem::path& dir);

}  // namespace dbfma
