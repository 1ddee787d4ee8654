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

#include "dbfma/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "dbfma/errors.hpp"

namespace dbfma {

namespace {

using nlohmann::json;

// Unit conversions leave noise like 3.4999999999999996 in the echo.
double tidy(double x) { return std::round(x * 1e9) / 1e9; }

// Reads known keys of one section and rejects the rest.
class Section {
public:
    Section(const json& doc, std::string name) : name_(std::move(name)) {
        if (doc.contains(name_)) {
            node_ = doc.at(name_);
            if (!node_.is_object()) {
                throw ConfigError("config: section '" + name_ + "' must be an object");
            }
        } else {
            node_ = json::object();
        }
    }

    template <typename T>
    void read(const char* key, T& out) {
        seen_.insert(key);
        if (!node_.contains(key)) {
            return;
        }
        try {
            out = node_.at(key).get<T>();
        } catch (const json::exception& e) {
            throw ConfigError("config: " + name_ + "." + key + ": " + e.what());
        }
    }

    void finish() const {
        for (const auto& [key, value] : node_.items()) {
            if (!seen_.contains(key)) {
                throw ConfigError("config: unknown key " + name_ + "." + key);
            }
        }
    }

private:
    std::string name_;
    json node_;
    std::set<std::string> seen_;
};

}  // namespace

void RunConfig::validate() const {
    setup.planner.validate();
    setup.likelihood.validate();
    setup.schedule.validate();
    setup.dims.validate();
    sim.validate();
    if (suite.per_track_per_scale < 1 || suite.scales.empty()) {
        throw ConfigError("config: suite needs at least one scenario per track and scale");
    }
    for (const double s : suite.scales) {
        if (!(s > 0.0 && s <= 1.0)) {
            throw ConfigError("config: target speed scales must lie in (0, 1]");
        }
    }
    if (!(suite.timeout > 0.0 && suite.target_lead >= 0.0)) {
        throw ConfigError("config: suite timeout must be positive and target_lead non-negative");
    }
    if (jobs < 1) {
        throw ConfigError("config: jobs must be at least 1");
    }
}

RunConfig parse_config(const json& doc, const std::filesystem::path& base_dir) {
    if (!doc.is_object()) {
        throw ConfigError("config: document must be an object");
    }
    static const std::set<std::string> kTop{"version", "planner", "likelihood", "schedule", "vehicle",
                                            "suite",   "sim",     "tracks",     "output_dir", "jobs"};
    for (const auto& [key, value] : doc.items()) {
        if (!kTop.contains(key)) {
            throw ConfigError("config: unknown key '" + key + "'");
        }
    }
    if (!doc.contains("version") || doc.at("version") != kConfigVersion) {
        throw ConfigError("config: expected \"version\": " + std::to_string(kConfigVersion));
    }

    RunConfig cfg;
    {
        Section s(doc, "planner");
        PlannerConfig& p = cfg.setup.planner;
        s.read("n_iter", p.n_iter);
        s.read("n_particles", p.n_particles);
        s.read("n_segments", p.n_segments);
        s.read("sigma_theta", p.sigma_theta);
        s.read("delta_s_f", p.delta_s_f);
        s.read("t_f", p.t_f);
        s.read("epsilon", p.epsilon);
        s.read("elitism", p.elitism);
        s.read("init_speed_rate", p.init_speed_rate);
        s.finish();
    }
    {
        Section s(doc, "likelihood");
        LikelihoodConfig& l = cfg.setup.likelihood;
        s.read("sigma_b", l.sigma_b);
        s.read("sigma_d", l.sigma_d);
        s.read("n_time_nodes", l.n_time_nodes);
        s.read("l_clamp", l.l_clamp);
        s.read("sigma_ca", l.sigma_ca);
        s.read("collision_node_factor", l.collision_node_factor);
        s.read("swept_collision", l.swept_collision);
        s.finish();
    }
    {
        Section s(doc, "schedule");
        TractionSchedule& t = cfg.setup.schedule;
        double v_max_mph = t.v_max / kMphToMps;
        double drive = t.a_drive_0 / kGravity;
        double brake0 = t.a_brake_0 / kGravity;
        double brake1 = t.a_brake_vmax / kGravity;
        double lat0 = t.a_lat_0 / kGravity;
        double lat1 = t.a_lat_vmax / kGravity;
        s.read("v_max_mph", v_max_mph);
        s.read("a_drive_0_g", drive);
        s.read("a_brake_0_g", brake0);
        s.read("a_brake_vmax_g", brake1);
        s.read("a_lat_0_g", lat0);
        s.read("a_lat_vmax_g", lat1);
        s.finish();
        t.v_max = v_max_mph * kMphToMps;
        t.a_drive_0 = drive * kGravity;
        t.a_brake_0 = brake0 * kGravity;
        t.a_brake_vmax = brake1 * kGravity;
        t.a_lat_0 = lat0 * kGravity;
        t.a_lat_vmax = lat1 * kGravity;
    }
    {
        Section s(doc, "vehicle");
        s.read("length", cfg.setup.dims.length);
        s.read("width", cfg.setup.dims.width);
        s.read("wheelbase", cfg.sim.wheelbase);
        s.finish();
    }
    {
        Section s(doc, "suite");
        s.read("per_track_per_scale", cfg.suite.per_track_per_scale);
        s.read("scales", cfg.suite.scales);
        s.read("seed", cfg.suite.seed);
        s.read("target_lead", cfg.suite.target_lead);
        s.read("timeout", cfg.suite.timeout);
        s.finish();
    }
    {
        Section s(doc, "sim");
        SimConfig& m = cfg.sim;
        s.read("dt", m.dt);
        s.read("replan_period", m.replan_period);
        s.read("prediction_dt", m.prediction_dt);
        s.read("max_steer", m.max_steer);
        s.read("lookahead_min", m.lookahead_min);
        s.read("lookahead_time", m.lookahead_time);
        s.read("k_speed", m.k_speed);
        s.read("k_along", m.k_along);
        s.read("follow_gap_min", m.follow_gap_min);
        s.read("follow_time_gap", m.follow_time_gap);
        s.read("follow_gain", m.follow_gain);
        s.read("follow_brake_fraction", m.follow_brake_fraction);
        s.read("record_trace", m.record_trace);
        s.finish();
    }
    try {
        if (doc.contains("tracks")) {
            for (const auto& t : doc.at("tracks")) {
                const std::filesystem::path p = t.get<std::string>();
                cfg.tracks.push_back(p.is_absolute() || base_dir.empty() ? p : base_dir / p);
            }
        }
        if (doc.contains("output_dir")) {
            const std::filesystem::path p = doc.at("output_dir").get<std::string>();
            cfg.output_dir = p.is_absolute() || base_dir.empty() ? p : base_dir / p;
        }
        if (doc.contains("jobs")) {
            cfg.jobs = doc.at("jobs").get<std::size_t>();
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config " + path.string());
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return parse_config(doc, path.parent_path());
}

json config_to_json(const RunConfig& cfg) {
    const PlannerConfig& p = cfg.setup.planner;
    const LikelihoodConfig& l = cfg.setup.likelihood;
    const TractionSchedule& t = cfg.setup.schedule;
    const SimConfig& m = cfg.sim;
    json tracks = json::array();
    for (const auto& tr : cfg.tracks) {
        tracks.push_back(tr.generic_string());
    }
    return {
        {"version", kConfigVersion},
        {"planner",
         {{"n_iter", p.n_iter},
          {"n_particles", p.n_particles},
          {"n_segments", p.n_segments},
          {"sigma_theta", p.sigma_theta},
          {"delta_s_f", p.delta_s_f},
          {"t_f", p.t_f},
          {"epsilon", p.epsilon},
          {"elitism", p.elitism},
          {"init_speed_rate", p.init_speed_rate}}},
        {"likelihood",
         {{"sigma_b", l.sigma_b},
          {"sigma_d", l.sigma_d},
          {"n_time_nodes", l.n_time_nodes},
          {"l_clamp", l.l_clamp},
          {"sigma_ca", l.sigma_ca},
          {"collision_node_factor", l.collision_node_factor},
          {"swept_collision", l.swept_collision}}},
        {"schedule",
         {{"v_max_mph", tidy(t.v_max / kMphToMps)},
          {"a_drive_0_g", tidy(t.a_drive_0 / kGravity)},
          {"a_brake_0_g", tidy(t.a_brake_0 / kGravity)},
          {"a_brake_vmax_g", tidy(t.a_brake_vmax / kGravity)},
          {"a_lat_0_g", tidy(t.a_lat_0 / kGravity)},
          {"a_lat_vmax_g", tidy(t.a_lat_vmax / kGravity)}}},
        {"vehicle", {{"length", cfg.setup.dims.length}, {"width", cfg.setup.dims.width}, {"wheelbase", m.wheelbase}}},
        {"suite",
         {{"per_track_per_scale", cfg.suite.per_track_per_scale},
          {"scales", cfg.suite.scales},
          {"seed", cfg.suite.seed},
          {"target_lead", cfg.suite.target_lead},
          {"timeout", cfg.suite.timeout}}},
        {"sim",
         {{"dt", m.dt},
          {"replan_period", m.replan_period},
          {"prediction_dt", m.prediction_dt},
          {"max_steer", m.max_steer},
          {"lookahead_min", m.lookahead_min},
          {"lookahead_time", m.lookahead_time},
          {"k_speed", m.k_speed},
          {"k_along", m.k_along},
          {"follow_gap_min", m.follow_gap_min},
          {"follow_time_gap", m.follow_time_gap},
          {"follow_gain", m.follow_gain},
          {"follow_brake_fraction", m.follow_brake_fraction},
          {"record_trace", m.record_trace}}},
        {"tracks", tracks},
        {"output_dir", cfg.output_dir.generic_string()},
        {"jobs", cfg.jobs},
    };
}

}  // namespace dbfma
