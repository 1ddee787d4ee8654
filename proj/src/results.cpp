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

#include "dbfma/results.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dbfma {

namespace {

using nlohmann::json;

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

ResultRecord ResultRecord::from(const Scenario& sc, const ScenarioResult& r) {
    ResultRecord rec;
    rec.scenario = sc;
    rec.success = r.success;
    rec.collided = r.collided;
    rec.timed_out = r.timed_out;
    rec.dvs = r.dvs;
    rec.dvs_max = r.dvs_max;
    rec.clamp_residual = r.clamp_residual;
    rec.cte = r.cte;
    rec.tto = r.tto;
    rec.end_time = r.end_time;
    rec.final_lead = r.final_lead;
    rec.plans_attempted = r.plans_attempted;
    rec.plans_feasible = r.plans_feasible;
    rec.plan_products = r.plan_products;
    rec.plan_times = r.plan_times;
    return rec;
}

ResultRecord ResultRecord::failed(const Scenario& sc, std::string error) {
    ResultRecord rec;
    rec.scenario = sc;
    rec.error = std::move(error);
    return rec;
}

std::string result_filename(std::uint64_t suite_seed, std::size_t index) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%llu_%04zu.json", static_cast<unsigned long long>(suite_seed), index);
    return buf;
}

std::filesystem::path timing_path(const std::filesystem::path& result) {
    std::filesystem::path p = result;
    p.replace_extension(".timing.json");
    return p;
}

json record_to_json(const ResultRecord& rec, const json& config_echo) {
    const Scenario& sc = rec.scenario;
    json result{
        {"success", rec.success},
        {"collided", rec.collided},
        {"timed_out", rec.timed_out},
        {"dvs", rec.dvs},
        {"dvs_max", rec.dvs_max},
        {"clamp_residual", rec.clamp_residual},
        {"cte", rec.cte},
        {"tto", rec.tto ? json(*rec.tto) : json(nullptr)},
        {"end_time", rec.end_time},
        {"final_lead", rec.final_lead},
        {"plans_attempted", rec.plans_attempted},
        {"plans_feasible", rec.plans_feasible},
        {"plan_products", rec.plan_products},
    };
    json doc{
        {"config", config_echo},
        {"scenario",
         {{"index", sc.index},
          {"track_id", sc.track_id},
          {"ego_start_s", sc.ego_start_s},
          {"target_speed_scale", sc.target_speed_scale},
          {"target_lead", sc.target_lead},
          {"timeout", sc.timeout},
          {"seed", sc.seed}}},
        {"result", result},
    };
    if (!rec.error.empty()) {
        doc["error"] = rec.error;
    }
    return doc;
}

ResultRecord record_from_json(const json& doc) {
    try {
        ResultRecord rec;
        const json& s = doc.at("scenario");
        rec.scenario.index = s.at("index").get<std::size_t>();
        rec.scenario.track_id = s.at("track_id").get<std::string>();
        rec.scenario.ego_start_s = s.at("ego_start_s").get<double>();
        rec.scenario.target_speed_scale = s.at("target_speed_scale").get<double>();
        rec.scenario.target_lead = s.at("target_lead").get<double>();
        rec.scenario.timeout = s.at("timeout").get<double>();
        rec.scenario.seed = s.at("seed").get<std::uint64_t>();
        if (doc.contains("error")) {
            rec.error = doc.at("error").get<std::string>();
        }
        const json& r = doc.at("result");
        rec.success = r.at("success").get<bool>();
        rec.collided = r.at("collided").get<bool>();
        rec.timed_out = r.at("timed_out").get<bool>();
        rec.dvs = r.at("dvs").get<double>();
        rec.dvs_max = r.at("dvs_max").get<double>();
        rec.clamp_residual = r.at("clamp_residual").get<double>();
        rec.cte = r.at("cte").get<double>();
        if (!r.at("tto").is_null()) {
            rec.tto = r.at("tto").get<double>();
        }
        rec.end_time = r.at("end_time").get<double>();
        rec.final_lead = r.at("final_lead").get<double>();
        rec.plans_attempted = r.at("plans_attempted").get<std::size_t>();
        rec.plans_feasible = r.at("plans_feasible").get<std::size_t>();
        rec.plan_products = r.at("plan_products").get<std::vector<double>>();
        return rec;
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string("malformed result: ") + e.what());
    }
}

void write_file_atomic(const std::filesystem::path& path, const std::string& text) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot write " + tmp.string());
        }
        out << text;
        if (!out) {
            throw std::runtime_error("write failed for " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

void write_record(const std::filesystem::path& dir, std::uint64_t suite_seed, const ResultRecord& rec,
                  const json& config_echo) {
    const std::filesystem::path path = dir / result_filename(suite_seed, rec.scenario.index);
    // Sidecar first: the main file's presence marks the scenario complete.
    write_file_atomic(timing_path(path), json{{"plan_times_ms", rec.plan_times}}.dump(2) + "\n");
    write_file_atomic(path, record_to_json(rec, config_echo).dump(2) + "\n");
}

ResultRecord read_record(const std::filesystem::path& path) {
    json doc;
    try {
        doc = json::parse(read_text(path));
    } catch (const json::parse_error& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
    ResultRecord rec = record_from_json(doc);
    const auto side = timing_path(path);
    if (std::filesystem::exists(side)) {
        try {
            rec.plan_times = json::parse(read_text(side)).at("plan_times_ms").get<std::vector<double>>();
        } catch (const json::exception& e) {
            throw std::runtime_error(side.string() + ": " + e.what());
        }
    }
    return rec;
}

void write_trace_csv(const std::filesystem::path& path, const std::vector<TraceRow>& trace) {
    std::ostringstream out;
    out.precision(17);
    out << "t,ego_x,ego_y,ego_vx,ego_vy,tgt_x,tgt_y,tgt_vx,tgt_vy,plan_id\n";
    for (const TraceRow& r : trace) {
        out << r.t << ',' << r.ego_pos.x << ',' << r.ego_pos.y << ',' << r.ego_vel.x << ',' << r.ego_vel.y << ','
            << r.tgt_pos.x << ',' << r.tgt_pos.y << ',' << r.tgt_vel.x << ',' << r.tgt_vel.y << ',' << r.plan_id
            << '\n';
    }
    write_file_atomic(path, out.str());
}

}  // namespace dbfma
