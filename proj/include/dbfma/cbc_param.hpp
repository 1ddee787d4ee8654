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

#include <limits>
#include <span>
#include <vector>

#include "dbfma/bezier.hpp"
#include "dbfma/track.hpp"

namespace dbfma {

/// Free parameters of an overtaking trajectory (one particle).
///
/// free_points holds [C_{0,2}, C_{0,3}, ..., C_{N-2,2}, C_{N-2,3}]: the tail
/// pair of every non-final segment. The first two control points of segment 0
/// come from the ego state, the last two of the final segment from the racing
/// line at s_f_ego, and each interior segment's head pair from its
/// predecessor's tail via the C0/C1 joint conditions.
struct ThetaVector {
    std::vector<Vec2> free_points;
    double s_f_ego = 0.0;

    [[nodiscard]] std::size_t segment_count() const { return free_points.size() / 2 + 1; }
    [[nodiscard]] std::size_t scalar_count() const { return 2 * free_points.size() + 1; }

    /// [x, y, x, y, ..., s_f_ego]
    [[nodiscard]] std::vector<double> flatten() const;
    static ThetaVector unflatten(std::span<const double> flat);

    friend bool operator==(const ThetaVector&, const ThetaVector&) = default;
};

/// Boundary states of a trajectory.
struct BoundaryStates {
    Vec2 start_position;
    Vec2 start_velocity;
    Vec2 end_position;
    Vec2 end_velocity;
};

/// Assembles the composite curve from free points and boundary states.
///
/// C_{0,1} = x0 + (T_F / (3 N_S)) v0 and C_{N-1,2} = x_end - (T_F / (3 N_S)) v_end,
/// so the curve's velocity equals v0 at t = 0 and v_end at t = T_F exactly.
CompositeBezier assemble_trajectory(std::span<const Vec2> free_points, const BoundaryStates& bounds, double t_f,
                                    std::size_t n_segments);

/// Builds the trajectory for theta; the terminal state is the racing line at theta.s_f_ego.
CompositeBezier build_trajectory(const ThetaVector& theta, const Vec2& ego_pos, const Vec2& ego_vel,
                                 const RacingLine& orl, double t_f, std::size_t n_segments);

/// Sample times per segment used by the least-squares racing-line fit.
inline constexpr std::size_t kLsqSamplesPerSegment = 16;

/// Arc length reached after `duration` seconds driving the racing line at its
/// nominal speed from s_now (RK4 on ds/dt = |v_orl(s)|). Unwrapped.
double advance_along_orl(const RacingLine& orl, double s_now, double duration, double speed_scale = 1.0);

/// Arc length reached after `duration` seconds when the speed starts at
/// start_speed and moves toward |v_orl(s)| by at most speed_rate m/s^2. Unwrapped.
double advance_with_speed_lag(const RacingLine& orl, double s_now, double start_speed, double duration,
                              double speed_rate);

/// Least-squares fit of the racing line over the horizon subject to the ego
/// start state. Sample m at t_m = T_F m / (M - 1) targets p_orl(s(t_m)).
///
/// With the default infinite speed_rate s(t) follows the racing-line speed
/// from s_now; a finite rate blends from the ego's speed instead (see
/// advance_with_speed_lag). Throws ConfigError when M is too small for the
/// free-parameter count.
ThetaVector lsq_fit_orl(const RacingLine& orl, const Vec2& ego_pos, const Vec2& ego_vel, double s_now, double t_f,
                        std::size_t n_segments, std::size_t samples = 0,
                        double speed_rate = std::numeric_limits<double>::infinity());

}  // namespace dbfma
