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

#include "dbfma/race_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dbfma/errors.hpp"
#include "dbfma/log.hpp"
#include "dbfma/rng.hpp"

namespace dbfma {

namespace {

constexpr double kMinLookaheadSpeed = 1.0;

// Pure-pursuit curvature toward goal.
double pursuit_curvature(const VehicleState& state, const Vec2& goal) {
    const Vec2 d = goal - state.position;
    const double dist = norm(d);
    if (dist < 1e-9) {
        return 0.0;
    }
    const double alpha = normalize_angle(heading_of(d) - state.heading);
    return 2.0 * std::sin(alpha) / dist;
}

double lookahead(const VehicleState& state, const SimConfig& cfg) {
    return std::max(cfg.lookahead_min, cfg.lookahead_time * state.speed());
}

Vec2 extrapolate(const CompositeBezier& traj, double tau) {
    const double end = traj.t_end();
    if (tau <= end) {
        return traj.position(tau);
    }
    return traj.position(end) + traj.velocity(end) * (tau - end);
}

struct Target {
    const RacingLine* orl;
    double scale;
    double s;  // unwrapped
};

}  // namespace

void SimConfig::validate() const {
    if (!(dt > 0.0 && replan_period >= dt && prediction_dt >= dt)) {
        throw ConfigError("sim: dt, replan_period, and prediction_dt must be positive with dt smallest");
    }
    if (!(wheelbase > 0.0 && max_steer > 0.0)) {
        throw ConfigError("sim: wheelbase and max_steer must be positive");
    }
    if (!(lookahead_min > 0.0 && lookahead_time >= 0.0)) {
        throw ConfigError("sim: lookahead parameters out of range");
    }
}

std::vector<Scenario> generate_suite(std::span<const TrackModel> tracks, const SuiteSpec& spec) {
    std::vector<Scenario> out;
    out.reserve(tracks.size() * spec.scales.size() * spec.per_track_per_scale);
    for (const TrackModel& track : tracks) {
        for (const double scale : spec.scales) {
            for (std::size_t k = 0; k < spec.per_track_per_scale; ++k) {
                Scenario sc;
                sc.index = out.size();
                sc.track_id = track.name();
                CounterRng rng(spec.seed, sc.index);
                sc.ego_start_s = track.racing_line().wrap(rng.uniform() * track.racing_line().total_length());
                sc.target_speed_scale = scale;
                sc.target_lead = spec.target_lead;
                sc.timeout = spec.timeout;
                sc.seed = mix64(spec.seed ^ mix64(sc.index + CounterRng::kGolden));
                out.push_back(std::move(sc));
            }
        }
    }
    return out;
}

double step_target(const RacingLine& orl, double scale, double s, double dt) {
    const double k1 = scale * norm(orl.state_at(s).velocity);
    const double k2 = scale * norm(orl.state_at(s + 0.5 * dt * k1).velocity);
    return s + dt * k2;
}

VehicleState target_state(const RacingLine& orl, double scale, double s, double t) {
    const OrlState st = orl.state_at(s);
    return {st.position, st.velocity * scale, heading_of(st.velocity), t};
}

TrackerStep integrate_vehicle(const VehicleState& state, double a_lon, double curvature, double dt,
                              const TractionSchedule& sched, const SimConfig& cfg) {
    const double v = state.speed();
    const double max_curv = std::tan(cfg.max_steer) / cfg.wheelbase;
    curvature = std::clamp(curvature, -max_curv, max_curv);
    TrackerStep out;
    out.commanded = {a_lon, v * v * curvature};
    out.applied = clamp_to_ellipse(out.commanded, v, sched);
    out.clamp_residual =
        std::hypot(out.commanded.a_lon - out.applied.a_lon, out.commanded.a_lat - out.applied.a_lat);
    const double kappa = v * v > 1e-6 ? out.applied.a_lat / (v * v) : curvature;

    const double v_next = std::clamp(v + out.applied.a_lon * dt, 0.0, sched.v_max);
    const double v_mid = 0.5 * (v + v_next);
    const double heading_next = state.heading + v_mid * kappa * dt;
    const double heading_mid = 0.5 * (state.heading + heading_next);
    out.next.position = state.position + unit_from_heading(heading_mid) * (v_mid * dt);
    out.next.heading = normalize_angle(heading_next);
    out.next.velocity = unit_from_heading(out.next.heading) * v_next;
    out.next.t = state.t + dt;
    return out;
}

TrackerStep ego_tracker(const VehicleState& state, const CompositeBezier& traj, double plan_start, double dt,
                        const TractionSchedule& sched, const SimConfig& cfg) {
    const double tau = state.t - plan_start;
    if (tau > traj.t_end() + 1e-9 || tau < traj.t0() - 1e-9) {
        throw ControllerStarvation("ego_tracker: plan horizon exhausted");
    }
    const double tc = std::clamp(tau, traj.t0(), traj.t_end());
    const Vec2 ref_pos = traj.position(tc);
    const Vec2 ref_vel = traj.velocity(tc);
    const Vec2 ref_acc = traj.acceleration(tc);
    const double ref_speed = norm(ref_vel);

    const double ld = lookahead(state, cfg);
    const double lead_time = ld / std::max(ref_speed, kMinLookaheadSpeed);
    const double curvature = pursuit_curvature(state, extrapolate(traj, tc + lead_time));

    const Vec2 fwd = unit_from_heading(state.heading);
    const double a_ff = ref_speed > kMinHeadingSpeed ? dot(ref_acc, ref_vel) / ref_speed : dot(ref_acc, fwd);
    const double along = dot(ref_pos - state.position, fwd);
    const double a_lon = a_ff + cfg.k_speed * (ref_speed - state.speed()) + cfg.k_along * along;
    return integrate_vehicle(state, a_lon, curvature, dt, sched, cfg);
}

PredictedTrajectory predict_along_orl(const RacingLine& orl, double scale, double s0, double t_f,
                                      const SimConfig& cfg) {
    const auto stride = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(cfg.prediction_dt / cfg.dt)));
    const auto steps = static_cast<std::size_t>(std::ceil(t_f / cfg.dt - 1e-9));
    std::vector<PredictedSample> samples;
    samples.reserve(steps / stride + 2);
    double s = s0;
    for (std::size_t k = 0;; ++k) {
        const double t = static_cast<double>(k) * cfg.dt;
        if (k % stride == 0 || k == steps) {
            const VehicleState st = target_state(orl, scale, s, t);
            samples.push_back({t, st.position, st.velocity});
        }
        if (k == steps) {
            break;
        }
        s = step_target(orl, scale, s, cfg.dt);
    }
    return PredictedTrajectory(std::move(samples));
}

ScenarioResult run_scenario(const Scenario& sc, const TrackModel& track, const PlannerSetup& setup,
                            const SimConfig& sim) {
    sim.validate();
    const RacingLine& orl = track.racing_line();
    const PlannerConfig& pcfg = setup.planner;
    const TractionSchedule& sched = setup.schedule;
    const double car_length = setup.dims.length;

    Target tgt{&orl, sc.target_speed_scale, orl.wrap(sc.ego_start_s)};
    tgt.s = advance_along_orl(orl, tgt.s, sc.target_lead, sc.target_speed_scale);

    const OrlState start = orl.state_at(sc.ego_start_s);
    VehicleState ego{start.position, start.velocity, heading_of(start.velocity), 0.0};

    // Unwrapped abscissae for the lead.
    double ego_s_wrapped = orl.wrap(sc.ego_start_s);
    double ego_s = ego_s_wrapped;
    double lead = ego_s - tgt.s;

    ScenarioResult res;
    std::optional<CompositeBezier> active;
    double plan_start = 0.0;
    std::size_t plan_id = 0;
    double next_replan = 0.0;
    std::size_t replan_count = 0;

    double dvs_sum = 0.0;
    double residual_sum = 0.0;
    double cte_sum = 0.0;
    std::size_t cte_n = 0;
    std::size_t steps = 0;

    auto attempt_plan = [&]() {
        PlanRequest req;
        req.ego_pos = ego.position;
        req.ego_vel = ego.velocity;
        req.ego_heading = ego.heading;
        req.s_now = ego_s_wrapped;
        req.prediction = predict_along_orl(orl, tgt.scale, tgt.s, pcfg.t_f, sim);
        req.s_f_target = track.project_onto_orl(req.prediction.samples().back().position);
        PlannerConfig cfg = pcfg;
        cfg.rng_seed = mix64(sc.seed + replan_count);
        ++replan_count;
        PlanResult r = plan(req, track, sched, setup.dims, cfg, setup.likelihood);
        ++res.plans_attempted;
        res.plan_times.push_back(r.timing_ms);
        if (r.feasible()) {
            ++res.plans_feasible;
            res.plan_products.push_back(r.breakdown.product);
            active = std::move(r.trajectory);
            plan_start = ego.t;
            ++plan_id;
            log::debug("t=", ego.t, " plan ", plan_id, " accepted, product ", r.breakdown.product);
        } else {
            log::debug("t=", ego.t, " plan infeasible, best product ", r.breakdown.product, " (ca ", r.breakdown.p_ca,
                       ", tk ", r.breakdown.p_tk, ", df ", r.breakdown.p_df, ")");
        }
        next_replan = ego.t + sim.replan_period;
    };

    // Cruise along the racing line, keeping a safe gap behind the target.
    auto follow = [&]() {
        const double ld = lookahead(ego, sim);
        const double curvature = pursuit_curvature(ego, orl.state_at(ego_s_wrapped + ld).position);
        const double v = ego.speed();
        double v_des = norm(orl.state_at(ego_s_wrapped).velocity);
        const double gap = -lead - car_length;
        if (gap > -car_length) {
            const double v_t = sc.target_speed_scale * norm(orl.state_at(tgt.s).velocity);
            const double brake = sim.follow_brake_fraction * std::abs(sched.brake_limit(v));
            const double room = gap - sim.follow_gap_min;
            const double v_safe = std::sqrt(std::max(0.0, v_t * v_t + 2.0 * brake * room));
            const double v_gap = v_t + sim.follow_gain * (gap - sim.follow_gap_min - sim.follow_time_gap * v);
            v_des = std::min({v_des, v_safe, std::max(v_gap, 0.0)});
        }
        return integrate_vehicle(ego, sim.k_speed * (v_des - v), curvature, sim.dt, sched, sim);
    };

    const auto max_steps = static_cast<std::size_t>(std::ceil(sc.timeout / sim.dt - 1e-9));
    while (true) {
        const VehicleState tstate = target_state(orl, sc.target_speed_scale, tgt.s, ego.t);
        if (sim.record_trace) {
            res.trace.push_back({ego.t, ego.position, ego.velocity, tstate.position, tstate.velocity, ego.heading,
                                 tstate.heading, active ? plan_id : 0});
        }
        const OrientedRect ego_fp{ego.position, ego.heading, setup.dims.half_length(), setup.dims.half_width()};
        const OrientedRect tgt_fp{tstate.position, tstate.heading, setup.dims.half_length(), setup.dims.half_width()};
        if (rect_separation(ego_fp, tgt_fp) < 0.0) {
            res.collided = true;
            break;
        }
        if (lead >= pcfg.delta_s_f) {
            res.success = true;
            res.tto = ego.t;
            break;
        }
        if (steps >= max_steps) {
            res.timed_out = true;
            break;
        }

        if (ego.t >= next_replan - 1e-9) {
            attempt_plan();
        }
        std::optional<TrackerStep> step;
        if (active) {
            try {
                step = ego_tracker(ego, *active, plan_start, sim.dt, sched, sim);
            } catch (const ControllerStarvation&) {
                active.reset();
                attempt_plan();
                if (active) {
                    step = ego_tracker(ego, *active, plan_start, sim.dt, sched, sim);
                }
            }
        }
        if (step) {
            cte_sum += distance(ego.position, active->position(ego.t - plan_start));
            ++cte_n;
        } else {
            step = follow();
        }

        const Vec2 measured = (step->next.velocity - ego.velocity) / sim.dt;
        const double v_mid = 0.5 * (ego.speed() + step->next.speed());
        const GGPoint gg = decompose(0.5 * (ego.velocity + step->next.velocity), measured, ego.heading);
        const double lam = lambda_offset(gg, v_mid, sched);
        dvs_sum += lam;
        res.dvs_max = std::max(res.dvs_max, lam);
        residual_sum += step->clamp_residual;
        ++steps;

        ego = step->next;
        tgt.s = step_target(orl, sc.target_speed_scale, tgt.s, sim.dt);
        const double proj = track.project_onto_orl(ego.position);
        ego_s += orl.offset(ego_s_wrapped, proj);
        ego_s_wrapped = proj;
        lead = ego_s - tgt.s;
    }
    res.end_time = ego.t;
    res.final_lead = lead;
    res.dvs = steps > 0 ? dvs_sum / static_cast<double>(steps) : 0.0;
    res.clamp_residual = steps > 0 ? residual_sum / static_cast<double>(steps) : 0.0;
    res.cte = cte_n > 0 ? cte_sum / static_cast<double>(cte_n) : 0.0;
    return res;
}

}  // namespace dbfma
