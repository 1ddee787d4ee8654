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
#include <limits>

#include "dbfma/cbc_param.hpp"
#include "dbfma/errors.hpp"
#include "dbfma/planner.hpp"
#include "dbfma/track_gen.hpp"
#include "fixtures.hpp"

using namespace dbfma;
using dbfma::testing::uniform;

namespace {

// Distance from x to the racing line, by dense polyline search.
double distance_to_line(const RacingLine& orl, const Vec2& x) {
    double best = std::numeric_limits<double>::infinity();
    const double step = 0.05;
    for (double s = 0.0; s <= orl.total_length(); s += step) {
        best = std::min(best, distance(orl.state_at(s).position, x));
    }
    return best;
}

}  // namespace

TEST_CASE("theta flattens in declared order") {
    ThetaVector th{{{1, 2}, {3, 4}, {5, 6}, {7, 8}}, 9};
    const auto flat = th.flatten();
    CHECK(flat == std::vector<double>{1, 2, 3, 4, 5, 6, 7, 8, 9});
    CHECK(ThetaVector::unflatten(flat) == th);
    CHECK(th.segment_count() == 3);
    CHECK_THROWS_AS(ThetaVector::unflatten(std::vector<double>{1, 2, 3}), std::invalid_argument);
}

TEST_CASE("property: boundary states hold for random theta") {
    const TrackModel oval = generate_track(TrackGenParams::defaults(TrackKind::oval));
    const RacingLine& orl = oval.racing_line();
    CounterRng rng(21, 0);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n_seg = 2 + static_cast<std::size_t>(trial % 3);
        ThetaVector th;
        const Vec2 x0{uniform(rng, -100, 500), uniform(rng, -20, 180)};
        const Vec2 v0{uniform(rng, -40, 40), uniform(rng, -40, 40)};
        for (std::size_t i = 0; i < 2 * (n_seg - 1); ++i) {
            th.free_points.push_back({uniform(rng, -100, 500), uniform(rng, -20, 180)});
        }
        th.s_f_ego = uniform(rng, 0, orl.total_length());
        const CompositeBezier c = build_trajectory(th, x0, v0, orl, 8.0, n_seg);
        const OrlState end = orl.state_at(th.s_f_ego);
        CHECK(distance(c.position(0.0), x0) < 1e-9);
        CHECK(distance(c.velocity(0.0), v0) < 1e-9);
        CHECK(distance(c.position(8.0), end.position) < 1e-9);
        CHECK(distance(c.velocity(8.0), end.velocity) < 1e-9);
        for (std::size_t j = 0; j + 1 < n_seg; ++j) {
            CHECK(distance(c.eval_segment(j, 1.0, 1), c.eval_segment(j + 1, 0.0, 1)) < 1e-9);
        }
    }
}

TEST_CASE("assemble validates its inputs") {
    const BoundaryStates b{{0, 0}, {1, 0}, {10, 0}, {1, 0}};
    const std::vector<Vec2> two{{3, 0}, {5, 0}};
    CHECK_THROWS_AS(assemble_trajectory(two, b, 8.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(assemble_trajectory(two, b, 8.0, 3), std::invalid_argument);
    CHECK_THROWS_AS(assemble_trajectory(two, b, 0.0, 2), std::invalid_argument);
}

TEST_CASE("straight racing line is fitted exactly") {
    const RacingLine orl = dbfma::testing::straight_line(600, 30);
    const ThetaVector th = lsq_fit_orl(orl, {50, 0}, {30, 0}, 50, 8.0, 2);
    const CompositeBezier c = build_trajectory(th, {50, 0}, {30, 0}, orl, 8.0, 2);
    CHECK(th.s_f_ego == doctest::Approx(290.0).epsilon(1e-9));
    for (double t = 0.0; t <= 8.0; t += 0.1) {
        const Vec2 p = c.position(t);
        CHECK(std::abs(p.y) < 1e-6);
        CHECK(std::abs(p.x - (50 + 30 * t)) < 1e-6);
    }
}

TEST_CASE("arc fit stays within a fraction of the sagitta") {
    const double r = 200;
    const double v = 20;
    const RacingLine orl = dbfma::testing::circle_line(r, v, 4000);
    const OrlState st = orl.state_at(0.0);
    const ThetaVector th = lsq_fit_orl(orl, st.position, st.velocity, 0.0, 8.0, 2, 64);
    const CompositeBezier c = build_trajectory(th, st.position, st.velocity, orl, 8.0, 2);
    const double theta = v * 8.0 / r;
    const double sagitta = r * (1 - std::cos(0.5 * theta));
    double worst = 0.0;
    for (double t = 0.0; t <= 8.0; t += 0.02) {
        worst = std::max(worst, std::abs(norm(c.position(t)) - r));
    }
    CHECK(worst < 0.05 * sagitta);
    // Reachable arc length at racing-line speed, within one sample spacing.
    CHECK(std::abs(orl.offset(v * 8.0, th.s_f_ego)) < orl.max_spacing());
}

TEST_CASE("fit tracks a racing line of constant curvature") {
    // Two cubics cannot follow a curvature jump inside one window, so the
    // windows here are a ring and the oval's straights.
    const RacingLine ring = dbfma::testing::circle_line(200, 30, 3000);
    const TrackModel oval = generate_track(TrackGenParams::defaults(TrackKind::oval));
    const std::vector<std::pair<const RacingLine*, double>> cases{
        {&ring, 0.0}, {&ring, 333.0}, {&ring, 900.0}, {&oval.racing_line(), 40.0}, {&oval.racing_line(), 690.0}};
    for (const auto& [line_ptr, s0] : cases) {
        const RacingLine& orl = *line_ptr;
        const OrlState st = orl.state_at(s0);
        const ThetaVector th = lsq_fit_orl(orl, st.position, st.velocity, s0, 8.0, 2);
        const CompositeBezier c = build_trajectory(th, st.position, st.velocity, orl, 8.0, 2);
        double worst = 0.0;
        for (double t = 0.0; t <= 8.0; t += 0.2) {
            worst = std::max(worst, distance_to_line(orl, c.position(t)));
        }
        CHECK(worst < 0.1);
    }
}

TEST_CASE("fit rejects too few samples") {
    const RacingLine orl = dbfma::testing::straight_line(600, 30);
    CHECK_THROWS_AS(lsq_fit_orl(orl, {0, 0}, {30, 0}, 0, 8.0, 2, 1), ConfigError);
    CHECK_THROWS_AS(lsq_fit_orl(orl, {0, 0}, {30, 0}, 0, 8.0, 1), ConfigError);
}

TEST_CASE("racing-line advance on a constant-speed circle") {
    const double r = 100;
    const double v = 25;
    const RacingLine orl = dbfma::testing::circle_line(r, v, 3000);
    const double period = orl.total_length() / v;
    const double lap = advance_along_orl(orl, 0.0, period);
    CHECK(std::abs(lap - orl.total_length()) < 1e-3 * orl.total_length());
    CHECK(std::abs(period - 2 * std::numbers::pi * r / v) < 1e-3 * period);
    CHECK(advance_along_orl(orl, 0.0, 4.0, 0.64) == doctest::Approx(0.64 * advance_along_orl(orl, 0.0, 4.0)));
}

TEST_CASE("speed-lag advance blends toward the racing-line speed") {
    const RacingLine orl = dbfma::testing::straight_line(2000, 40);
    // 20 -> 40 m/s at 2 m/s^2 takes 10 s and covers 300 m.
    CHECK(advance_with_speed_lag(orl, 0, 20, 10, 2) == doctest::Approx(300.0).epsilon(1e-9));
    CHECK(advance_with_speed_lag(orl, 0, 20, 15, 2) == doctest::Approx(500.0).epsilon(1e-9));
    CHECK(advance_with_speed_lag(orl, 0, 40, 5, 2) == doctest::Approx(200.0).epsilon(1e-9));
}

TEST_CASE("finish-ahead clipping") {
    const RacingLine orl = dbfma::testing::circle_line(100, 25, 2000);
    const double len = orl.total_length();
    ThetaVector th{{{0, 0}, {1, 1}}, 0};

    th.s_f_ego = 300;
    CHECK(clip_finish_ahead(th, 200, 15.6, orl).s_f_ego == doctest::Approx(300));
    th.s_f_ego = 200;
    CHECK(clip_finish_ahead(th, 200, 15.6, orl).s_f_ego == doctest::Approx(215.6));

    // Ahead by 7 m across the start line: kept for a 5 m margin, raised for 15.6.
    th.s_f_ego = 2;
    CHECK(clip_finish_ahead(th, len - 5, 5.0, orl).s_f_ego == doctest::Approx(2));
    CHECK(clip_finish_ahead(th, len - 5, 15.6, orl).s_f_ego == doctest::Approx(10.6));
    // Raised values are wrapped.
    th.s_f_ego = len - 8;
    CHECK(clip_finish_ahead(th, len - 5, 15.6, orl).s_f_ego == doctest::Approx(10.6));
}
