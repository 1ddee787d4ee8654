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

#include <functional>
#include <string>
#include <vector>

#include "dbfma/track.hpp"
#include "dbfma/vehicle_dynamics.hpp"

namespace dbfma {

enum class TrackKind { oval, chicane, straight };

/// Parses "oval", "chicane" or "straight"; throws ConfigError otherwise.
TrackKind parse_track_kind(const std::string& name);
std::string to_string(TrackKind kind);

struct TrackGenParams {
    TrackKind kind = TrackKind::oval;
    std::string name;
    /// Length of each straight (the whole corridor for `straight`).
    double straight_length = 400.0;
    double radius = 80.0;
    double width = 12.0;
    double v_cap = 40.0;
    /// Lateral excursion and length of the cosine bump on the chicane's lower straight.
    double bump_amplitude = 15.0;
    double bump_length = 120.0;
    double spacing = 1.0;
    /// Fraction of the traction ellipse the speed profile may use.
    double grip_fraction = 0.8;

    /// Defaults for a kind: the chicane uses a 60 m radius.
    static TrackGenParams defaults(TrackKind kind);
    /// Throws ConfigError on non-positive dimensions or a bump that does not fit.
    void validate() const;
};

/// Largest v <= v_cap with v^2 |kappa| <= a_lat_limit(v), by fixed-point iteration.
double curvature_speed_limit(double kappa, double v_cap, const std::function<double(double)>& a_lat_limit);

/// Lateral acceleration available at speed v with zero longitudinal
/// acceleration, scaled by grip_fraction.
double usable_lateral_accel(double v, const TractionSchedule& sched, double grip_fraction);

struct SpeedProfileInput {
    std::vector<double> ds;         // spacing to the next point (closed: last wraps to first)
    std::vector<double> curvature;  // signed, per point
    bool closed = true;
};

/// Curvature-limited speeds followed by forward (drive) and backward (brake)
/// passes inside the traction ellipse, repeated twice around closed loops.
std::vector<double> speed_profile(const SpeedProfileInput& in, const TractionSchedule& sched, double v_cap,
                                  double grip_fraction);

/// Builds and validates the track; throws ConfigError if it is malformed.
TrackModel generate_track(const TrackGenParams& params, const TractionSchedule& sched = {});

}  // namespace dbfma
