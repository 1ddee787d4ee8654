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

#include "dbfma/likelihood.hpp"

#include <cmath>
#include <stdexcept>

#include "dbfma/errors.hpp"

namespace dbfma {

namespace {

// Heading of v, or the last heading seen when v is too slow to define one.
struct HeadingTracker {
    double heading;
    Vec2 forward(const Vec2& v) {
        if (norm(v) > kMinHeadingSpeed) {
            heading = heading_of(v);
        }
        return unit_from_heading(heading);
    }
};

double lambda_at(const Vec2& vel, const Vec2& acc, const TractionSchedule& sched, HeadingTracker& ht) {
    const Vec2 fwd = ht.forward(vel);
    const GGPoint gg{dot(acc, fwd), dot(acc, perp(fwd))};
    return lambda_offset(gg, norm(vel), sched);
}

using CollisionNodes = LikelihoodEvaluator::CollisionNodes;

CollisionNodes collision_nodes(const PredictedTrajectory& prediction, const VehicleDims& dims,
                               const LikelihoodConfig& cfg, double t0, double t_f) {
    if (!prediction.covers(t0, t0 + t_f)) {
        throw std::domain_error("collision likelihood: prediction does not cover the planning horizon");
    }
    const std::size_t n = cfg.n_time_nodes * std::max<std::size_t>(1, cfg.collision_node_factor);
    QuadratureRule rule = gauss_legendre(n, t0, t0 + t_f);
    CollisionNodes out;
    out.times = std::move(rule.nodes);
    out.weights = std::move(rule.weights);
    out.reach.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double lo = i == 0 ? t0 : 0.5 * (out.times[i - 1] + out.times[i]);
        const double hi = i + 1 == n ? t0 + t_f : 0.5 * (out.times[i] + out.times[i + 1]);
        out.reach[i] = cfg.swept_collision ? std::max(out.times[i] - lo, hi - out.times[i]) : 0.0;
    }
    double heading = heading_of(prediction.samples().front().velocity);
    for (const double t : out.times) {
        const PredictedSample s = prediction.state_at(t);
        out.target.push_back(footprint_at(s.position, s.velocity, dims, heading));
        out.target_velocity.push_back(s.velocity);
        heading = out.target.back().heading;
    }
    return out;
}

double collision_log_survival(const CompositeBezier& traj, const CollisionNodes& nodes, double target_sigma,
                              const VehicleDims& dims, const LikelihoodConfig& cfg, double start_heading) {
    const CollisionModel model = cfg.collision_model();
    std::vector<double> l(nodes.times.size());
    HeadingTracker ht{start_heading};
    for (std::size_t i = 0; i < l.size(); ++i) {
        const double t = nodes.times[i];
        const Vec2 vel = traj.velocity(t);
        ht.forward(vel);
        const double grow = norm(vel - nodes.target_velocity[i]) * nodes.reach[i];
        const OrientedRect ego{traj.position(t), normalize_angle(ht.heading), dims.half_length() + grow,
                               dims.half_width() + grow};
        l[i] = instantaneous_collision_prob(ego, nodes.target[i], target_sigma, model);
    }
    return log_survival_from_hazard(l, nodes.weights, cfg.l_clamp);
}

}  // namespace

void LikelihoodConfig::validate() const {
    if (!(sigma_b > 0.0)) {
        throw ConfigError("likelihood: sigma_b must be positive");
    }
    if (!(sigma_d > 0.0)) {
        throw ConfigError("likelihood: sigma_d must be positive");
    }
    if (n_time_nodes < 8) {
        throw ConfigError("likelihood: n_time_nodes must be at least 8");
    }
    if (!(l_clamp > 0.0 && l_clamp < 1.0)) {
        throw ConfigError("likelihood: l_clamp must lie in (0, 1)");
    }
    if (!(sigma_ca > 0.0)) {
        throw ConfigError("likelihood: sigma_ca must be positive");
    }
}

double log_survival_from_hazard(std::span<const double> l_values, std::span<const double> weights, double l_clamp) {
    if (l_values.size() != weights.size()) {
        throw std::logic_error("survival_from_hazard: value and weight counts differ");
    }
    double integral = 0.0;
    for (std::size_t i = 0; i < l_values.size(); ++i) {
        const double l = l_values[i];
        if (!(l >= 0.0 && l <= l_clamp)) {
            throw std::logic_error("survival_from_hazard: instantaneous probability outside [0, l_clamp]");
        }
        integral += weights[i] * l / (1.0 - l);
    }
    return -integral;
}

double survival_from_hazard(std::span<const double> l_values, std::span<const double> weights, double l_clamp) {
    return std::exp(log_survival_from_hazard(l_values, weights, l_clamp));
}

double survival_from_hazard(const std::function<double(double)>& l, double t_f, const LikelihoodConfig& cfg) {
    const QuadratureRule rule = gauss_legendre(cfg.n_time_nodes, 0.0, t_f);
    std::vector<double> values(rule.nodes.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        values[i] = l(rule.nodes[i]);
    }
    return survival_from_hazard(values, rule.weights, cfg.l_clamp);
}

double track_violation_prob(double omega, const LikelihoodConfig& cfg) {
    if (omega <= 0.0) {
        return 0.0;
    }
    return std::min(normal_cdf(omega / cfg.sigma_b) - 0.5, cfg.l_clamp);
}

double dynamics_violation_prob(double lambda, const LikelihoodConfig& cfg) {
    if (lambda <= 0.0) {
        return 0.0;
    }
    return std::min(normal_cdf(lambda / cfg.sigma_d) - 0.5, cfg.l_clamp);
}

double p_track_keeping(const CompositeBezier& traj, const TrackModel& track, const LikelihoodConfig& cfg) {
    return survival_from_hazard(
        [&](double t) { return track_violation_prob(track.distance_to_drivable(traj.position(traj.t0() + t)), cfg); },
        traj.horizon(), cfg);
}

double p_dynamic_feasibility(const CompositeBezier& traj, const TractionSchedule& sched, const LikelihoodConfig& cfg,
                             double start_heading) {
    HeadingTracker ht{start_heading};
    return survival_from_hazard(
        [&](double t) {
            const double at = traj.t0() + t;
            return dynamics_violation_prob(lambda_at(traj.velocity(at), traj.acceleration(at), sched, ht), cfg);
        },
        traj.horizon(), cfg);
}

double p_collision_free(const CompositeBezier& traj, const PredictedTrajectory& prediction, const VehicleDims& dims,
                        const LikelihoodConfig& cfg, double start_heading) {
    const CollisionNodes nodes = collision_nodes(prediction, dims, cfg, traj.t0(), traj.horizon());
    return std::exp(collision_log_survival(traj, nodes, prediction.position_sigma(), dims, cfg, start_heading));
}

LikelihoodBreakdown combine(double log_ca, double log_tk, double log_df) {
    LikelihoodBreakdown b;
    b.p_ca = std::exp(log_ca);
    b.p_tk = std::exp(log_tk);
    b.p_df = std::exp(log_df);
    b.product = b.p_ca * b.p_tk * b.p_df;
    b.log_product = log_ca + log_tk + log_df;
    return b;
}

LikelihoodEvaluator::LikelihoodEvaluator(const TrackModel& track, const TractionSchedule& sched,
                                         const LikelihoodConfig& cfg, const VehicleDims& dims,
                                         const PredictedTrajectory& prediction, double t_f, double t0)
    : track_(&track),
      sched_(sched),
      cfg_(cfg),
      dims_(dims),
      sigma_target_(prediction.position_sigma()),
      collision_(collision_nodes(prediction, dims, cfg, t0, t_f)) {
    QuadratureRule rule = gauss_legendre(cfg.n_time_nodes, t0, t0 + t_f);
    times_ = std::move(rule.nodes);
    weights_ = std::move(rule.weights);
}

LikelihoodBreakdown LikelihoodEvaluator::evaluate(const CompositeBezier& traj, double start_heading) const {
    const std::size_t n = times_.size();
    std::vector<double> l_tk(n);
    std::vector<double> l_df(n);
    HeadingTracker ht{start_heading};
    for (std::size_t i = 0; i < n; ++i) {
        const double t = times_[i];
        l_tk[i] = track_violation_prob(track_->distance_to_drivable(traj.position(t)), cfg_);
        l_df[i] = dynamics_violation_prob(lambda_at(traj.velocity(t), traj.acceleration(t), sched_, ht), cfg_);
    }
    return combine(collision_log_survival(traj, collision_, sigma_target_, dims_, cfg_, start_heading),
                   log_survival_from_hazard(l_tk, weights_, cfg_.l_clamp),
                   log_survival_from_hazard(l_df, weights_, cfg_.l_clamp));
}

}  // namespace dbfma
