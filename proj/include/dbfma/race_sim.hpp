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

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dbfma/bezier.hpp"
#include "dbfma/collision.hpp"
#include "dbfma/likelihood.hpp"
#include "dbfma/planner.hpp"
#include "dbfma/track.hpp"
#include "dbfma/vehicle_dynamics.hpp"

namespace dbfma {

struct Scenario {
    std::size_t index = 0;
    std::string track_id;
    double ego_start_s = 0.0;
    double target_speed_scale = 0.64;
    double target_lead = 0.5;
    double timeout = 80.0;
    std::uint64_t seed = 0;
};

struct SuiteSpec {
    std::size_t per_track_per_scale = 10;
    std::vector<double> scales{0.64, 0.76, 0.88};
    std::uint64_t seed = 1;
    double target_lead = 0.5;
    double timeout = 80.0;
};

/// Track-major, then scale, then repetition. Start positions are uniform on
/// the racing line and depend only on (seed, index).
std::vector<Scenario> generate_suite(std::span<const TrackModel> tracks, const SuiteSpec& spec);

struct VehicleState {
    Vec2 position;
    Vec2 velocity;
    double heading = 0.0;
    double t = 0.0;

    [[nodiscard]] double speed() const { return norm(velocity); }
};

struct SimConfig {
    double dt = 0.01;
    double replan_period = 0.5;
    double prediction_dt = 0.05;
    double wheelbase = 3.0;
    double max_steer = 0.6;
    double lookahead_min = 5.0;
    double lookahead_time = 0.5;
    double k_speed = 2.0;
    double k_along = 1.0;
    // Following behind the target when no plan is active.
    double follow_gap_min = 4.0;
    double follow_time_gap = 0.3;
    double follow_gain = 0.5;
    double follow_brake_fraction = 0.7;
    bool record_trace = true;

    void validate() const;
};

/// Everything plan() needs besides the request.
struct PlannerSetup {
    PlannerConfig planner;
    LikelihoodConfig likelihood;
    TractionSchedule schedule;
    VehicleDims dims;
};

/// Arc length after one RK2 (midpoint) step of ds/dt = scale |v_orl(s)|. Unwrapped.
double step_target(const RacingLine& orl, double scale, double s, double dt);

/// Target pose at arc length s: racing-line position, scaled racing-line
/// velocity, heading along the racing line.
VehicleState target_state(const RacingLine& orl, double scale, double s, double t);

/// Ground-truth prediction of a vehicle driving the racing line at scale times
/// its nominal speed from s0, integrated at cfg.dt and sampled every
/// cfg.prediction_dt over [0, t_f]. Sample times start at 0.
PredictedTrajectory predict_along_orl(const RacingLine& orl, double scale, double s0, double t_f,
                                      const SimConfig& cfg);

struct TrackerStep {
    VehicleState next;
    GGPoint commanded;
    GGPoint applied;
    /// |commanded - applied| in the gg plane.
    double clamp_residual = 0.0;
};

/// Integrates a kinematic bicycle for one step from a longitudinal command and
/// a steering curvature, after clamping (a_lon, v^2 kappa) into the traction ellipse.
TrackerStep integrate_vehicle(const VehicleState& state, double a_lon, double curvature, double dt,
                              const TractionSchedule& sched, const SimConfig& cfg);

/// Pure pursuit toward the trajectory point one lookahead ahead in time, plus
/// feedforward speed tracking of |dT/dt|. traj is in plan time; plan_start
/// maps it to sim time. Throws ControllerStarvation past the horizon.
TrackerStep ego_tracker(const VehicleState& state, const CompositeBezier& traj, double plan_start, double dt,
                        const TractionSchedule& sched, const SimConfig& cfg);

struct TraceRow {
    double t = 0.0;
    Vec2 ego_pos;
    Vec2 ego_vel;
    Vec2 tgt_pos;
    Vec2 tgt_vel;
    double ego_heading = 0.0;
    double tgt_heading = 0.0;
    std::size_t plan_id = 0;
};

struct ScenarioResult {
    bool success = false;
    bool collided = false;
    bool timed_out = false;
    /// Mean and max radial traction-ellipse violation of the measured ego acceleration.
    double dvs = 0.0;
    double dvs_max = 0.0;
    /// Mean commanded-vs-applied residual of the tracker clamp.
    double clamp_residual = 0.0;
    /// Mean distance to the active plan point, over steps with a plan.
    double cte = 0.0;
    std::optional<double> tto;
    double end_time = 0.0;
    double final_lead = 0.0;
    std::size_t plans_attempted = 0;
    std::size_t plans_feasible = 0;
    /// Product likelihood of every returned plan.
    std::vector<double> plan_products;
    /// Wall time of every plan call.
    std::vector<double> plan_times;
    std::vector<TraceRow> trace;
};

ScenarioResult run_scenario(const Scenario& sc, const TrackModel& track, const PlannerSetup& setup,
                            const SimConfig& sim);

}  // namespace dbfma
