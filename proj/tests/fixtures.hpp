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

#include <cmath>
#include <numbers>
#include <vector>

#include "dbfma/rng.hpp"
#include "dbfma/track.hpp"

namespace dbfma::testing {

// Open straight along +x from the origin at constant speed.
inline RacingLine straight_line(double length, double speed, double spacing = 1.0) {
    std::vector<OrlSample> s;
    const auto n = static_cast<std::size_t>(std::llround(length / spacing));
    for (std::size_t i = 0; i <= n; ++i) {
        const double x = static_cast<double>(i) * spacing;
        s.push_back({x, {x, 0.0}, {speed, 0.0}});
    }
    return RacingLine(std::move(s), static_cast<double>(n) * spacing, false);
}

inline TrackModel straight_track(double length, double width, double speed) {
    const double h = 0.5 * width;
    std::vector<Vec2> left{{0.0, h}, {length, h}};
    std::vector<Vec2> right{{0.0, -h}, {length, -h}};
    return TrackModel("straight", left, right, straight_line(length, speed));
}

// Counter-clockwise circle of radius r about the origin at constant speed,
// starting at (r, 0).
inline RacingLine circle_line(double r, double speed, std::size_t n) {
    const double chord = 2.0 * r * std::sin(std::numbers::pi / static_cast<double>(n));
    std::vector<OrlSample> s;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
        s.push_back({chord * static_cast<double>(i), {r * std::cos(a), r * std::sin(a)},
                     {-speed * std::sin(a), speed * std::cos(a)}});
    }
    return RacingLine(std::move(s), chord * static_cast<double>(n), true);
}

inline std::vector<Vec2> circle_loop(double r, std::size_t n) {
    std::vector<Vec2> pts;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
        pts.push_back({r * std::cos(a), r * std::sin(a)});
    }
    return pts;
}

inline TrackModel ring_track(double r, double width, double speed, std::size_t n = 1200) {
    return TrackModel("ring", circle_loop(r - 0.5 * width, n), circle_loop(r + 0.5 * width, n),
                      circle_line(r, speed, n));
}

inline double uniform(CounterRng& rng, double lo, double hi) { return lo + (hi - lo) * rng.uniform(); }

}  // namespace dbfma::testing
