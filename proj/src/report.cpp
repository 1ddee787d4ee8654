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

#include "dbfma/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace dbfma {

namespace {

ReportRow summarize(std::string label, const std::vector<const ResultRecord*>& recs) {
    ReportRow row;
    row.label = std::move(label);
    row.scenarios = recs.size();
    double dvs = 0.0;
    double cte = 0.0;
    double tto = 0.0;
    std::size_t completed = 0;
    std::vector<double> times;
    for (const ResultRecord* r : recs) {
        times.insert(times.end(), r->plan_times.begin(), r->plan_times.end());
        for (const double p : r->plan_products) {
            row.min_plan_product = std::min(row.min_plan_product, p);
        }
        if (!r->error.empty()) {
            ++row.errors;
            continue;
        }
        ++completed;
        row.successes += r->success ? 1 : 0;
        row.collisions += r->collided ? 1 : 0;
        dvs += r->dvs;
        cte += r->cte;
        if (r->success && r->tto) {
            tto += *r->tto;
        }
    }
    if (completed > 0) {
        row.dvs = dvs / static_cast<double>(completed);
        row.cte = cte / static_cast<double>(completed);
    }
    if (row.successes > 0) {
        row.tto = tto / static_cast<double>(row.successes);
    }
    row.plan_calls = times.size();
    if (!times.empty()) {
        double sum = 0.0;
        for (const double t : times) {
            sum += t;
        }
        row.plan_time_mean = sum / static_cast<double>(times.size());
        double sq = 0.0;
        for (const double t : times) {
            sq += (t - row.plan_time_mean) * (t - row.plan_time_mean);
        }
        row.plan_time_std = std::sqrt(sq / static_cast<double>(times.size()));
    }
    return row;
}

std::string scale_label(double scale) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", scale);
    return buf;
}

}  // namespace

SuiteReport build_report(const std::vector<ResultRecord>& records) {
    std::map<double, std::vector<const ResultRecord*>> by_scale;
    std::vector<const ResultRecord*> all;
    for (const ResultRecord& r : records) {
        by_scale[r.scenario.target_speed_scale].push_back(&r);
        all.push_back(&r);
    }
    SuiteReport rep;
    for (const auto& [scale, recs] : by_scale) {
        rep.rows.push_back(summarize(scale_label(scale), recs));
    }
    rep.rows.push_back(summarize("All", all));
    return rep;
}

void print_report(std::ostream& out, const SuiteReport& report) {
    char line[256];
    std::snprintf(line, sizeof line, "%-6s %9s %9s %10s %8s %8s %8s %14s %7s\n", "scale", "success", "collide",
                  "dvs", "cte_m", "tto_s", "min_p", "plan_ms", "errors");
    out << line;
    for (const ReportRow& r : report.rows) {
        char succ[32];
        std::snprintf(succ, sizeof succ, "%zu/%zu", r.successes, r.scenarios);
        char tto[32];
        if (r.tto) {
            std::snprintf(tto, sizeof tto, "%.2f", *r.tto);
        } else {
            std::snprintf(tto, sizeof tto, "-");
        }
        char pt[48];
        std::snprintf(pt, sizeof pt, "%.1f+-%.1f", r.plan_time_mean, r.plan_time_std);
        std::snprintf(line, sizeof line, "%-6s %9s %9zu %10.4f %8.3f %8s %8.4f %14s %7zu\n", r.label.c_str(), succ,
                      r.collisions, r.dvs, r.cte, tto, r.min_plan_product, pt, r.errors);
        out << line;
    }
}

std::string report_csv(const SuiteReport& report) {
    std::ostringstream out;
    out.precision(17);
    out << "scale,scenarios,successes,collisions,errors,dvs,cte,tto,min_plan_product,plan_calls,plan_time_mean_ms,"
           "plan_time_std_ms\n";
    for (const ReportRow& r : report.rows) {
        out << r.label << ',' << r.scenarios << ',' << r.successes << ',' << r.collisions << ',' << r.errors << ','
            << r.dvs << ',' << r.cte << ',';
        if (r.tto) {
            out << *r.tto;
        }
        out << ',' << r.min_plan_product << ',' << r.plan_calls << ',' << r.plan_time_mean << ','
            << r.plan_time_std << '\n';
    }
    return out.str();
}

LoadedResults load_results(const std::filesystem::path& dir) {
    LoadedResults out;
    if (!std::filesystem::is_directory(dir)) {
        return out;
    }
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        const auto& p = entry.path();
        const std::string name = p.filename().string();
        if (entry.is_regular_file() && p.extension() == ".json" && name.find(".timing.") == std::string::npos &&
            name != "config.json") {
            files.push_back(p);
        }
    }
    std::sort(files.begin(), files.end());
    for (const auto& p : files) {
        try {
            out.records.push_back(read_record(p));
        } catch (const std::exception& e) {
            out.corrupt.emplace_back(p, e.what());
        }
    }
    return out;
}

}  // namespace dbfma
