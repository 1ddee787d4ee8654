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
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "dbfma/cbc_param.hpp"
#include "dbfma/collision.hpp"
#include "dbfma/likelihood.hpp"
#include "dbfma/rng.hpp"
#include "dbfma/track.hpp"
#include "dbfma/vehicle_dynamics.hpp"

namespace dbfma {

struct PlannerConfig {
    std::size_t n_iter = 8;
    std::size_t n_particles = 256;
    std::size_t n_segments = 2;
    double sigma_theta = 0.875;
    double delta_s_f = 15.6;
    double t_f = 8.0;
    double epsilon = 0.05;
    std::uint64_t rng_seed = 0;
    /// Carry the best particle of each iteration into the next one unperturbed.
    bool elitism = true;
    /// Speed rate (m/s^2) of the initial fit's reference timing as it blends
    /// from the ego speed to the racing-line speed; infinity times the fit at
    /// racing-line speed throughout.
    double init_speed_rate = 3.0;

    /// Throws ConfigError when a field is out of range.
    void validate() const;
};

struct PlanRequest {
    Vec2 ego_pos;
    Vec2 ego_vel;
    /// Used while the ego is too slow to define a heading.
    double ego_heading = 0.0;
    /// Ego arc length on the racing line; projected from ego_pos when NaN.
    double s_now = std::numeric_limits<double>::quiet_NaN();
    PredictedTrajectory prediction;
    /// Racing-line arc length of the prediction's endpoint.
    double s_f_target = 0.0;
};

enum class PlanOutcome { trajectory, infeasible };

struct PlanResult {
    PlanOutcome outcome = PlanOutcome::infeasible;
    /// Set when outcome == trajectory.
    std::optional<CompositeBezier> trajectory;
    ThetaVector theta;
    /// Breakdown of the returned particle, or of the best one seen when infeasible.
    LikelihoodBreakdown breakdown;
    std::size_t iterations_used = 0;
    double timing_ms = 0.0;
    /// Best product of each scoring pass.
    std::vector<double> best_history;

    [[nodiscard]] bool feasible() const { return outcome == PlanOutcome::trajectory; }
};

/// Adds independent N(0, sigma^2) noise to every free scalar, s_f_ego included.
ThetaVector perturb(const ThetaVector& theta, double sigma_theta, CounterRng& rng);

/// Raises s_f_ego to s_f_target + delta_s_f when it lags that, comparing
/// wrap-aware offsets on closed lines. The result is wrapped.
ThetaVector clip_finish_ahead(const ThetaVector& theta, double s_f_target, double delta_s_f, const RacingLine& orl);

/// Low-variance resampling: output j takes the particle whose cumulative
/// weight interval contains (j + u0) / n_out. Non-positive totals resample uniformly.
std::vector<std::size_t> systematic_resample(std::span<const double> weights, std::size_t n_out, double u0);

std::vector<ThetaVector> resample(std::span<const ThetaVector> particles, std::span<const double> weights,
                                  CounterRng& rng);

/// Runs the particle filter. Throws std::domain_error when the prediction
/// does not cover [0, t_f], ConfigError on invalid configuration.
PlanResult plan(const PlanRequest& req, const TrackModel& track, const TractionSchedule& sched,
                const VehicleDims& dims, const PlannerConfig& cfg, const LikelihoodConfig& lcfg);

}  // namespace dbfma
