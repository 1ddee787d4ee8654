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

#include "dbfma/vec2.hpp"

namespace dbfma {

inline constexpr double kGravity = 9.80665;
inline constexpr double kMphToMps = 0.44704;
/// Below this speed the velocity direction is not trusted as a heading.
inline constexpr double kMinHeadingSpeed = 0.1;

/// Speed-dependent traction ellipse, linear in speed between rest and v_max.
///
/// Drive limit falls from a_drive_0 to 0 at v_max, the braking limit runs from
/// a_brake_0 to a_brake_vmax and the lateral limit from a_lat_0 to a_lat_vmax.
/// Speeds above v_max use the v_max values.
struct TractionSchedule {
    double v_max = 165.0 * kMphToMps;
    double a_drive_0 = 1.5 * kGravity;
    double a_brake_0 = -1.5 * kGravity;
    double a_brake_vmax = -2.5 * kGravity;
    double a_lat_0 = 2.0 * kGravity;
    double a_lat_vmax = 3.5 * kGravity;

    /// Throws ConfigError on sign violations or a collapsed ellipse.
    void validate() const;

    [[nodiscard]] double drive_limit(double speed) const;
    [[nodiscard]] double brake_limit(double speed) const;
    [[nodiscard]] double lateral_limit(double speed) const;
};

struct Ellipse {
    double center_lon = 0.0;
    double semi_lon = 0.0;
    double semi_lat = 0.0;
};

/// Longitudinal / lateral acceleration pair (m/s^2). Lateral is positive to the left.
struct GGPoint {
    double a_lon = 0.0;
    double a_lat = 0.0;
};

/// Throws std::domain_error for negative speed.
Ellipse ellipse_at(double speed, const TractionSchedule& sched);

/// Projects accel onto the velocity frame. Throws std::domain_error when
/// |vel| <= kMinHeadingSpeed; use the heading overload there.
GGPoint decompose(const Vec2& vel, const Vec2& accel);

/// As above, but falls back to `fallback_heading` for slow velocities.
GGPoint decompose(const Vec2& vel, const Vec2& accel, double fallback_heading);

/// (a_lat / semi_lat)^2 + ((a_lon - c_lon) / semi_lon)^2; feasible iff <= 1.
double ellipse_form(const GGPoint& gg, double speed, const TractionSchedule& sched);

/// Distance from gg to the ellipse boundary along the ray from the ellipse
/// center through gg; zero when gg is feasible.
double lambda_offset(const GGPoint& gg, double speed, const TractionSchedule& sched);

/// Pulls an infeasible gg radially back onto the ellipse boundary.
GGPoint clamp_to_ellipse(const GGPoint& gg, double speed, const TractionSchedule& sched);

}  // namespace dbfma
