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

#include "dbfma/planner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "dbfma/errors.hpp"
#include "dbfma/log.hpp"

namespace dbfma {

namespace {

constexpr std::uint64_t kResampleStream = 0xffffffffULL;

std::uint64_t stream_id(std::size_t iteration, std::size_t particle) {
    return (static_cast<std::uint64_t>(iteration) << 32) | static_cast<std::uint64_t>(particle);
}

}  // namespace

void PlannerConfig::validate() const {
    if (n_iter < 1 || n_particles < 1) {
        throw ConfigError("planner: n_iter and n_particles must be at least 1");
    }
    if (n_segments < 2) {
        throw ConfigError("planner: n_segments must be at least 2");
    }
    if (!(sigma_theta > 0.0)) {
        throw ConfigError("planner: sigma_theta must be positive");
    }
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw ConfigError("planner: epsilon must lie in (0, 1)");
    }
    if (!(t_f > 0.0)) {
        throw ConfigError("planner: t_f must be positive");
    }
    if (!(init_speed_rate > 0.0)) {
        throw ConfigError("planner: init_speed_rate must be positive");
    }
    if (!(delta_s_f >= 0.0)) {
        throw ConfigError("planner: delta_s_f must be non-negative");
    }
}

ThetaVector perturb(const ThetaVector& theta, double sigma_theta, CounterRng& rng) {
    ThetaVector out = theta;
    if (sigma_theta == 0.0) {
        return out;
    }
    for (Vec2& p : out.free_points) {
        p.x += sigma_theta * rng.normal();
        p.y += sigma_theta * rng.normal();
    }
    out.s_f_ego += sigma_theta * rng.normal();
    return out;
}

ThetaVector clip_finish_ahead(const ThetaVector& theta, double s_f_target, double delta_s_f, const RacingLine& orl) {
    ThetaVector out = theta;
    if (orl.offset(s_f_target, theta.s_f_ego) < delta_s_f) {
        out.s_f_ego = s_f_target + delta_s_f;
    }
    out.s_f_ego = orl.wrap(out.s_f_ego);
    return out;
}

std::vector<std::size_t> systematic_resample(std::span<const double> weights, std::size_t n_out, double u0) {
    const std::size_t n = weights.size();
    std::vector<std::size_t> idx(n_out);
    if (n == 0) {
        return {};
    }
    double total = 0.0;
    for (const double w : weights) {
        total += std::max(w, 0.0);
    }
    if (!(total > 0.0) || !std::isfinite(total)) {
        for (std::size_t j = 0; j < n_out; ++j) {
            idx[j] = (j * n) / n_out;
        }
        return idx;
    }
    std::size_t i = 0;
    double cumulative = std::max(weights[0], 0.0) / total;
    for (std::size_t j = 0; j < n_out; ++j) {
        const double u = (static_cast<double>(j) + u0) / static_cast<double>(n_out);
        while (u >= cumulative && i + 1 < n) {
            ++i;
            cumulative += std::max(weights[i], 0.0) / total;
        }
        idx[j] = i;
    }
    return idx;
}

std::vector<ThetaVector> resample(std::span<const ThetaVector> particles, std::span<const double> weights,
                                  CounterRng& rng) {
    const auto idx = systematic_resample(weights, particles.size(), rng.uniform());
    std::vector<ThetaVector> out;
    out.reserve(idx.size());
    for (const std::size_t i : idx) {
        out.push_back(particles[i]);
    }
    return out;
}

PlanResult plan(const PlanRequest& req, const TrackModel& track, const TractionSchedule& sched,
                const VehicleDims& dims, const PlannerConfig& cfg, const LikelihoodConfig& lcfg) {
    const auto started = std::chrono::steady_clock::now();
    cfg.validate();
    lcfg.validate();
    const RacingLine& orl = track.racing_line();
    const LikelihoodEvaluator evaluator(track, sched, lcfg, dims, req.prediction, cfg.t_f);
    const double heading = norm(req.ego_vel) > kMinHeadingSpeed ? heading_of(req.ego_vel) : req.ego_heading;
    const double s_now = std::isnan(req.s_now) ? track.project_onto_orl(req.ego_pos) : req.s_now;

    const ThetaVector init = clip_finish_ahead(
        lsq_fit_orl(orl, req.ego_pos, req.ego_vel, s_now, cfg.t_f, cfg.n_segments, 0, cfg.init_speed_rate), req.s_f_target, cfg.delta_s_f,
        orl);
    const std::size_t np = cfg.n_particles;
    std::vector<ThetaVector> particles(np, init);
    std::vector<LikelihoodBreakdown> scores(np);
    std::vector<double> weights(np);

    PlanResult result;
    result.breakdown = {0.0, 0.0, 0.0, 0.0, -std::numeric_limits<double>::infinity()};
    const double accept = 1.0 - cfg.epsilon;

    auto finish = [&](PlanResult& r) {
        r.timing_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
        return r;
    };

    for (std::size_t iter = 0; iter < cfg.n_iter; ++iter) {
        // Slot 0 holds the elite (the initial fit on the first pass).
        const std::size_t first = cfg.elitism ? 1 : 0;
        for (std::size_t i = first; i < np; ++i) {
            CounterRng rng(cfg.rng_seed, stream_id(iter, i));
            particles[i] = clip_finish_ahead(perturb(particles[i], cfg.sigma_theta, rng), req.s_f_target,
                                             cfg.delta_s_f, orl);
        }

        std::size_t best = 0;
        for (std::size_t i = 0; i < np; ++i) {
            const CompositeBezier traj =
                build_trajectory(particles[i], req.ego_pos, req.ego_vel, orl, cfg.t_f, cfg.n_segments);
            scores[i] = evaluator.evaluate(traj, heading);
            if (scores[i].log_product > scores[best].log_product) {
                best = i;
            }
        }
        result.iterations_used = iter + 1;
        result.best_history.push_back(scores[best].product);
        if (scores[best].log_product > result.breakdown.log_product || iter == 0) {
            result.breakdown = scores[best];
            result.theta = particles[best];
        }
        log::debug("plan iteration ", iter, ": best product ", scores[best].product, " (ca ", scores[best].p_ca,
                   ", tk ", scores[best].p_tk, ", df ", scores[best].p_df, ")");

        if (scores[best].product >= accept) {
            result.outcome = PlanOutcome::trajectory;
            result.breakdown = scores[best];
            result.theta = particles[best];
            result.trajectory =
                build_trajectory(particles[best], req.ego_pos, req.ego_vel, orl, cfg.t_f, cfg.n_segments);
            return finish(result);
        }
        if (iter + 1 == cfg.n_iter) {
            break;
        }

        // Relative weights in the log domain keep information when every
        // particle's product underflows.
        const double top = scores[best].log_product;
        for (std::size_t i = 0; i < np; ++i) {
            weights[i] = std::isfinite(top) ? std::exp(scores[i].log_product - top) : 1.0;
        }
        CounterRng rng(cfg.rng_seed, stream_id(iter, kResampleStream));
        const ThetaVector elite = particles[best];
        particles = resample(particles, weights, rng);
        if (cfg.elitism) {
            particles[0] = elite;
        }
    }
    result.outcome = PlanOutcome::infeasible;
    return finish(result);
}

}  // namespace dbfma
