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

#include "dbfma/vehicle_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dbfma/errors.hpp"

namespace dbfma {

namespace {

double interpolate(double at_rest, double at_vmax, double speed, double v_max) {
    const double f = std::clamp(speed / v_max, 0.0, 1.0);
    return at_rest + (at_vmax - at_rest) * f;
}

// Center-relative point and its ellipse-metric radius.
struct Radial {
    double d_lon;
    double d_lat;
    double rho;
};

Radial radial(const GGPoint& gg, const Ellipse& e) {
    const double d_lon = gg.a_lon - e.center_lon;
    const double d_lat = gg.a_lat;
    return {d_lon, d_lat, std::hypot(d_lon / e.semi_lon, d_lat / e.semi_lat)};
}

}  // namespace

void TractionSchedule::validate() const {
    if (!(v_max > 0.0)) {
        throw ConfigError("traction schedule: v_max must be positive");
    }
    if (!(a_drive_0 > 0.0)) {
        throw ConfigError("traction schedule: drive limit at rest must be positive");
    }
    if (!(a_brake_0 < 0.0 && a_brake_vmax < 0.0)) {
        throw ConfigError("traction schedule: braking limits must be negative");
    }
    if (!(a_lat_0 > 0.0 && a_lat_vmax > 0.0)) {
        throw ConfigError("traction schedule: lateral limits must be positive");
    }
}

double TractionSchedule::drive_limit(double speed) const { return interpolate(a_drive_0, 0.0, speed, v_max); }

double TractionSchedule::brake_limit(double speed) const { return interpolate(a_brake_0, a_brake_vmax, speed, v_max); }

double TractionSchedule::lateral_limit(double speed) const { return interpolate(a_lat_0, a_lat_vmax, speed, v_max); }

Ellipse ellipse_at(double speed, const TractionSchedule& sched) {
    if (speed < 0.0 || std::isnan(speed)) {
        throw std::domain_error("ellipse_at: negative speed");
    }
    const double d = sched.drive_limit(speed);
    const double b = sched.brake_limit(speed);
    return {0.5 * (d + b), 0.5 * (d - b), sched.lateral_limit(speed)};
}

GGPoint decompose(const Vec2& vel, const Vec2& accel) {
    const double speed = norm(vel);
    if (!(speed > kMinHeadingSpeed)) {
        throw std::domain_error("decompose: velocity too small to define a heading");
    }
    const Vec2 fwd = vel / speed;
    return {dot(accel, fwd), dot(accel, perp(fwd))};
}

GGPoint decompose(const Vec2& vel, const Vec2& accel, double fallback_heading) {
    const double speed = norm(vel);
    const Vec2 fwd = speed > kMinHeadingSpeed ? vel / speed : unit_from_heading(fallback_heading);
    return {dot(accel, fwd), dot(accel, perp(fwd))};
}

double ellipse_form(const GGPoint& gg, double speed, const TractionSchedule& sched) {
    const Ellipse e = ellipse_at(speed, sched);
    const double u = gg.a_lat / e.semi_lat;
    const double w = (gg.a_lon - e.center_lon) / e.semi_lon;
    return u * u + w * w;
}

double lambda_offset(const GGPoint& gg, double speed, const TractionSchedule& sched) {
    const Ellipse e = ellipse_at(speed, sched);
    const Radial r = radial(gg, e);
    if (r.rho <= 1.0) {
        return 0.0;
    }
    return std::hypot(r.d_lon, r.d_lat) * (1.0 - 1.0 / r.rho);
}

GGPoint clamp_to_ellipse(const GGPoint& gg, double speed, const TractionSchedule& sched) {
    const Ellipse e = ellipse_at(speed, sched);
    const Radial r = radial(gg, e);
    if (r.rho <= 1.0) {
        return gg;
    }
    return {e.center_lon + r.d_lon / r.rho, r.d_lat / r.rho};
}

}  // namespace dbfma
