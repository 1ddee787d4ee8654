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

#include "dbfma/track_io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

#include <nlohmann/json.hpp>

#include "dbfma/errors.hpp"

namespace dbfma {

namespace {

std::vector<std::vector<double>> read_csv(const std::filesystem::path& path, const std::vector<std::string>& header) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open " + path.string());
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw ConfigError(path.string() + ": missing header");
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    std::vector<std::string> cols;
    {
        std::stringstream ss(line);
        std::string c;
        while (std::getline(ss, c, ',')) {
            cols.push_back(c);
        }
    }
    if (cols != header) {
        throw ConfigError(path.string() + ": unexpected header '" + line + "'");
    }
    std::vector<std::vector<double>> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        std::vector<double> row;
        std::stringstream ss(line);
        std::string c;
        while (std::getline(ss, c, ',')) {
            try {
                std::size_t used = 0;
                row.push_back(std::stod(c, &used));
                if (used != c.size()) {
                    throw std::invalid_argument(c);
                }
            } catch (const std::exception&) {
                throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": bad number '" + c + "'");
            }
        }
        if (row.size() != header.size()) {
            throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                              std::to_string(header.size()) + " columns");
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<Vec2> read_points(const std::filesystem::path& path) {
    std::vector<Vec2> pts;
    for (const auto& r : read_csv(path, {"x", "y"})) {
        pts.push_back({r[0], r[1]});
    }
    return pts;
}

void write_points(const std::filesystem::path& path, std::span<const Vec2> pts) {
    std::ofstream out(path);
    out << std::setprecision(17) << "x,y\n";
    for (const auto& p : pts) {
        out << p.x << ',' << p.y << '\n';
    }
    if (!out) {
        throw ConfigError("failed writing " + path.string());
    }
}

}  // namespace

TrackModel load_track(const std::filesystem::path& manifest) {
    std::ifstream in(manifest);
    if (!in) {
        throw ConfigError("cannot open track manifest " + manifest.string());
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(manifest.string() + ": " + e.what());
    }
    try {
        if (j.value("version", kTrackFormatVersion) != kTrackFormatVersion) {
            throw ConfigError(manifest.string() + ": unsupported track format version");
        }
        const auto dir = manifest.parent_path();
        const bool closed = j.at("closed").get<bool>();
        auto inner = read_points(dir / j.at("inner").get<std::string>());
        auto outer = read_points(dir / j.at("outer").get<std::string>());
        const auto orl_rows = read_csv(dir / j.at("orl").get<std::string>(), {"s", "x", "y", "vx", "vy"});
        std::vector<OrlSample> samples;
        samples.reserve(orl_rows.size());
        for (const auto& r : orl_rows) {
            samples.push_back({r[0], {r[1], r[2]}, {r[3], r[4]}});
        }
        double length = 0.0;
        if (j.contains("length")) {
            length = j.at("length").get<double>();
        } else if (!samples.empty()) {
            length = samples.back().s;
            if (closed) {
                length += distance(samples.back().position, samples.front().position);
            }
        }
        RacingLine orl(std::move(samples), length, closed);
        return TrackModel(j.value("name", manifest.parent_path().filename().string()), std::move(inner),
                          std::move(outer), std::move(orl));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(manifest.string() + ": " + e.what());
    }
}

std::filesystem::path save_track(const TrackModel& track, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    write_points(dir / "inner.csv", track.inner());
    write_points(dir / "outer.csv", track.outer());
    {
        std::ofstream out(dir / "orl.csv");
        out << std::setprecision(17) << "s,x,y,vx,vy\n";
        for (const auto& smp : track.racing_line().samples()) {
            out << smp.s << ',' << smp.position.x << ',' << smp.position.y << ',' << smp.velocity.x << ','
                << smp.velocity.y << '\n';
        }
        if (!out) {
            throw ConfigError("failed writing orl.csv in " + dir.string());
        }
    }
    nlohmann::json j = {
        {"format", "dbfma-track"},
        {"version", kTrackFormatVersion},
        {"name", track.name()},
        {"closed", track.closed()},
        {"length", track.racing_line().total_length()},
        {"inner", "inner.csv"},
        {"outer", "outer.csv"},
        {"orl", "orl.csv"},
    };
    const auto manifest = dir / "track.json";
    std::ofstream(manifest) << j.dump(2) << '\n';
    return manifest;
}

}  // namespace dbfma
