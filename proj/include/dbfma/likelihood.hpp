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
#include <span>
#include <vector>

#include "dbfma/bezier.hpp"
#include "dbfma/collision.hpp"
#include "dbfma/quadrature.hpp"
#include "dbfma/track.hpp"
#include "dbfma/vehicle_dynamics.hpp"

namespace dbfma {

struct LikelihoodConfig {
    double sigma_b = 0.75;
    double sigma_d = 0.2;
    std::size_t n_time_nodes = 32;
    double l_clamp = kDefaultLMax;
    double sigma_ca = kDefaultSigmaCa;
    /// The collision integral uses n_time_nodes * collision_node_factor nodes.
    std::size_t collision_node_factor = 4;
    /// Inflate the ego footprint at each collision node by the relative
    /// displacement up to the neighbouring nodes, so contacts between nodes register.
    bool swept_collision = true;

    /// Throws ConfigError when a field is out of range.
    void validate() const;
    [[nodiscard]] CollisionModel collision_model() const { return {sigma_ca, l_clamp}; }
};

/// Each factor is a survival probability; the log_* fields keep the exponent
/// when the probability underflows.
struct LikelihoodBreakdown {
    double p_ca = 1.0;
    double p_tk = 1.0;
    double p_df = 1.0;
    double product = 1.0;
    double log_product = 0.0;
};

/// exp(-sum w_n L_n / (1 - L_n)). Throws std::logic_error when some L is outside [0, l_clamp].
double survival_from_hazard(std::span<const double> l_values, std::span<const double> weights, double l_clamp);
/// Negated hazard integral, i.e. the log of the survival probability.
double log_survival_from_hazard(std::span<const double> l_values, std::span<const double> weights, double l_clamp);
/// Samples L on the Gauss-Legendre nodes of [0, t_f].
double survival_from_hazard(const std::function<double(double)>& l, double t_f, const LikelihoodConfig& cfg);

/// L_TK = Phi(Omega / sigma_b) - 0.5.
double track_violation_prob(double omega, const LikelihoodConfig& cfg);
/// L_DF = Phi(Lambda / sigma_d) - 0.5.
double dynamics_violation_prob(double lambda, const LikelihoodConfig& cfg);

double p_track_keeping(const CompositeBezier& traj, const TrackModel& track, const LikelihoodConfig& cfg);
double p_dynamic_feasibility(const CompositeBezier& traj, const TractionSchedule& sched, const LikelihoodConfig& cfg,
                             double start_heading = 0.0);
/// Throws std::domain_error unless the prediction covers the trajectory horizon.
double p_collision_free(const CompositeBezier& traj, const PredictedTrajectory& prediction, const VehicleDims& dims,
                        const LikelihoodConfig& cfg, double start_heading = 0.0);

LikelihoodBreakdown combine(double log_ca, double log_tk, double log_df);

/// Scores many trajectories against one prediction over a fixed horizon.
/// Node times and the target footprints are computed once.
class LikelihoodEvaluator {
public:
    /// Throws std::domain_error unless the prediction covers [t0, t0 + t_f].
    LikelihoodEvaluator(const TrackModel& track, const TractionSchedule& sched, const LikelihoodConfig& cfg,
                        const VehicleDims& dims, const PredictedTrajectory& prediction, double t_f, double t0 = 0.0);

    /// start_heading orients footprints and gg frames while the trajectory is
    /// slower than kMinHeadingSpeed.
    [[nodiscard]] LikelihoodBreakdown evaluate(const CompositeBezier& traj, double start_heading = 0.0) const;

    [[nodiscard]] std::span<const double> node_times() const { return times_; }

    struct CollisionNodes {
        std::vector<double> times;
        std::vector<double> weights;
        std::vector<double> reach;  // time from a node to the far edge of its cell
        std::vector<OrientedRect> target;
        std::vector<Vec2> target_velocity;
    };

private:
    const TrackModel* track_;
    TractionSchedule sched_;
    LikelihoodConfig cfg_;
    VehicleDims dims_;
    double sigma_target_;
    std::vector<double> times_;
    std::vector<double> weights_;
    CollisionNodes collision_;
};

}  // namespace dbfma
