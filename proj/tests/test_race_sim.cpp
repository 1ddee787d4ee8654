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

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dbfma/collision.hpp"
#include "dbfma/errors.hpp"
#include "dbfma/race_sim.hpp"
#include "dbfma/track_gen.hpp"
#include "fixtures.hpp"

using namespace dbfma;

namespace {

CompositeBezier straight_plan(Vec2 p, Vec2 v, double t_f) {
    const double d = t_f / 3.0;
    return CompositeBezier({BezierSegment({p, p + v * d, p + v * (2 * d), p + v * t_f}, t_f)}, 0.0);
}

int terminal_count(const ScenarioResult& r) {
    return (r.success ? 1 : 0) + (r.collided ? 1 : 0) + (r.timed_out ? 1 : 0);
}

// Rechecks overlap on a trace at one tenth of the step, interpolating poses.
bool dense_overlap(const ScenarioResult& r, const VehicleDims& dims, double* first_time) {
    for (std::size_t i = 0; i + 1 < r.trace.size(); ++i) {
        const TraceRow& a = r.trace[i];
        const TraceRow& b = r.trace[i + 1];
        for (int k = 0; k <= 10; ++k) {
            const double f = k / 10.0;
            auto pose = [&](Vec2 pa, Vec2 pb, double ha, double hb) {
                return OrientedRect{lerp(pa, pb, f), ha + f * normalize_angle(hb - ha), dims.half_length(),
                                    dims.half_width()};
            };
            const OrientedRect e = pose(a.ego_pos, b.ego_pos, a.ego_heading, b.ego_heading);
            const OrientedRect t = pose(a.tgt_pos, b.tgt_pos, a.tgt_heading, b.tgt_heading);
            if (rects_intersect(e, t)) {
                *first_time = a.t + f * (b.t - a.t);
                return true;
            }
        }
    }
    if (!r.trace.empty()) {
        const TraceRow& a = r.trace.back();
        const OrientedRect e{a.ego_pos, a.ego_heading, dims.half_length(), dims.half_width()};
        const OrientedRect t{a.tgt_pos, a.tgt_heading, dims.half_length(), dims.half_width()};
        if (rects_intersect(e, t)) {
            *first_time = a.t;
            return true;
        }
    }
    return false;
}

}  // namespace

TEST_CASE("suite generation") {
    const std::vector<TrackModel> tracks{generate_track(TrackGenParams::defaults(TrackKind::oval)),
                                         generate_track(TrackGenParams::defaults(TrackKind::chicane))};
    const SuiteSpec spec;
    const auto a = generate_suite(tracks, spec);
    const auto b = generate_suite(tracks, spec);
    REQUIRE(a.size() == 60);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].index == i);
        CHECK(a[i].ego_start_s == b[i].ego_start_s);
        CHECK(a[i].seed == b[i].seed);
        CHECK(a[i].track_id == (i < 30 ? "oval" : "chicane"));
        CHECK(a[i].target_speed_scale == spec.scales[(i / 10) % 3]);
        CHECK(a[i].ego_start_s >= 0.0);
        CHECK(a[i].ego_start_s < tracks[i / 30].racing_line().total_length());
    }
    SuiteSpec other = spec;
    other.seed = 2;
    CHECK(generate_suite(tracks, other)[0].ego_start_s != a[0].ego_start_s);
    SuiteSpec big = spec;
    big.per_track_per_scale = 200;
    const std::vector<TrackModel> three{tracks[0], tracks[1], tracks[0]};
    CHECK(generate_suite(three, big).size() == 1800);
}

TEST_CASE("target motion on a constant-speed circle") {
    const double r = 80;
    const double v = 30;
    const RacingLine orl = dbfma::testing::circle_line(r, v, 3000);
    const double period = 2 * std::numbers::pi * r / v;
    double s = 0.0;
    double t = 0.0;
    const double dt = 0.01;
    while (s < orl.total_length()) {
        s = step_target(orl, 1.0, s, dt);
        t += dt;
    }
    CHECK(std::abs(t - period) < 1e-3 * period);

    double s1 = 0.0;
    double s064 = 0.0;
    for (int i = 0; i < 500; ++i) {
        s1 = step_target(orl, 1.0, s1, dt);
        s064 = step_target(orl, 0.64, s064, dt);
    }
    CHECK(s064 == doctest::Approx(0.64 * s1).epsilon(1e-9));

    const VehicleState st = target_state(orl, 0.64, 10.0, 0.0);
    const OrlState o = orl.state_at(10.0);
    CHECK(st.position == o.position);
    CHECK(distance(st.velocity, o.velocity * 0.64) < 1e-12);
}

TEST_CASE("tracker on a straight trajectory") {
    const TractionSchedule sched;
    const SimConfig cfg;
    const CompositeBezier plan = straight_plan({0, 0}, {30, 0}, 8.0);
    VehicleState s{{0, 0}, {30, 0}, 0.0, 0.0};
    double worst = 0.0;
    for (int i = 0; i < 500; ++i) {
        const TrackerStep step = ego_tracker(s, plan, 0.0, cfg.dt, sched, cfg);
        s = step.next;
        worst = std::max(worst, distance(s.position, plan.position(s.t)));
    }
    CHECK(worst < 0.01);

    VehicleState late{{0, 0}, {30, 0}, 0.0, 8.5};
    CHECK_THROWS_AS(ego_tracker(late, plan, 0.0, cfg.dt, sched, cfg), ControllerStarvation);
}

TEST_CASE("vehicle integration respects the traction ellipse") {
    const TractionSchedule sched;
    const SimConfig cfg;
    const VehicleState s{{0, 0}, {20, 0}, 0.0, 0.0};
    const TrackerStep inside = integrate_vehicle(s, 2.0, 0.01, cfg.dt, sched, cfg);
    CHECK(inside.applied.a_lon == inside.commanded.a_lon);
    CHECK(inside.applied.a_lat == inside.commanded.a_lat);
    CHECK(inside.clamp_residual == 0.0);

    // From rest, full throttle.
    VehicleState v{{0, 0}, {0, 0}, 0.0, 0.0};
    double prev = 0.0;
    for (int i = 0; i < 3000; ++i) {
        const TrackerStep step = integrate_vehicle(v, 100.0, 0.0, cfg.dt, sched, cfg);
        CHECK(step.applied.a_lon <= sched.drive_limit(v.speed()) + 1e-9);
        v = step.next;
        CHECK(v.speed() >= prev);
        CHECK(v.speed() <= sched.v_max + 1e-6);
        prev = v.speed();
    }
}

TEST_CASE("no speed advantage means no overtake") {
    const TrackModel oval = generate_track(TrackGenParams::defaults(TrackKind::oval));
    Scenario sc;
    sc.track_id = "oval";
    sc.ego_start_s = 100;
    sc.target_speed_scale = 1.0;
    sc.timeout = 10.0;
    sc.seed = 5;
    SimConfig sim;
    sim.record_trace = false;
    const ScenarioResult r = run_scenario(sc, oval, {}, sim);
    CHECK(r.timed_out);
    CHECK_FALSE(r.success);
    CHECK(terminal_count(r) == 1);
}

TEST_CASE("blocked corridor never succeeds") {
    const TrackModel corridor = dbfma::testing::straight_track(2000, 1.9, 30);
    Scenario sc;
    sc.track_id = "straight";
    sc.ego_start_s = 0;
    sc.target_speed_scale = 0.01;
    sc.target_lead = 300.0;
    sc.timeout = 8.0;
    sc.seed = 6;
    const ScenarioResult r = run_scenario(sc, corridor, {}, {});
    CHECK_FALSE(r.success);
    CHECK_FALSE(r.collided);
    CHECK(r.timed_out);
    CHECK(r.plans_feasible == 0);
}

TEST_CASE("property: scenario invariants on short runs") {
    const TrackModel chicane = generate_track(TrackGenParams::defaults(TrackKind::chicane));
    const std::vector<TrackModel> tracks{chicane};
    SuiteSpec spec;
    spec.per_track_per_scale = 1;
    spec.seed = 17;
    const PlannerSetup setup;
    for (const Scenario& sc : generate_suite(tracks, spec)) {
        const ScenarioResult r = run_scenario(sc, chicane, setup, {});
        const ScenarioResult again = run_scenario(sc, chicane, setup, {});
        CHECK(terminal_count(r) == 1);
        if (r.success) {
            CHECK(r.final_lead >= setup.planner.delta_s_f);
            REQUIRE(r.tto.has_value());
            CHECK(*r.tto == doctest::Approx(r.end_time));
        }
        for (const double p : r.plan_products) {
            CHECK(p >= 1 - setup.planner.epsilon);
        }
        for (const TraceRow& row : r.trace) {
            CHECK(norm(row.ego_vel) <= setup.schedule.v_max + 1e-6);
        }
        double t_hit = 0.0;
        CHECK(dense_overlap(r, setup.dims, &t_hit) == r.collided);
        CHECK(again.success == r.success);
        CHECK(again.end_time == r.end_time);
        CHECK(again.cte == r.cte);
        CHECK(again.dvs == r.dvs);
        CHECK(again.plan_products == r.plan_products);
    }
}

TEST_CASE("forced collision is confirmed by the dense recheck") {
    // No planner room and no braking when following: the ego runs into the target.
    const TrackModel corridor = dbfma::testing::straight_track(2000, 1.9, 30);
    Scenario sc;
    sc.track_id = "straight";
    sc.target_speed_scale = 0.3;
    sc.target_lead = 1.0;
    sc.timeout = 20.0;
    SimConfig sim;
    sim.follow_gap_min = -100;
    sim.follow_brake_fraction = 0.0;
    sim.follow_gain = 0.0;
    const VehicleDims dims;
    const ScenarioResult r = run_scenario(sc, corridor, {}, sim);
    REQUIRE(r.collided);
    double t_hit = 0.0;
    REQUIRE(dense_overlap(r, dims, &t_hit));
    CHECK(t_hit >= r.end_time - sim.dt - 1e-9);
    CHECK(terminal_count(r) == 1);
}
