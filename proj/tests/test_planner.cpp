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
#include <numeric>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "dbfma/errors.hpp"
#include "dbfma/planner.hpp"
#include "dbfma/track_gen.hpp"
#include "fixtures.hpp"

using namespace dbfma;

namespace {

PredictedTrajectory hold(Vec2 p, Vec2 v, double t_f = 8.0) {
    std::vector<PredictedSample> s;
    for (int k = 0; k <= 160; ++k) {
        const double t = t_f * k / 160.0;
        s.push_back({t, p + v * t, v});
    }
    return PredictedTrajectory(std::move(s));
}

// Pearson statistic of total multiplicities against n_trials * n_out * w.
double resampling_p_value(const std::vector<double>& w, std::size_t n_out, int n_trials, std::uint64_t seed) {
    CounterRng rng(seed, 0);
    std::vector<double> counts(w.size(), 0.0);
    for (int t = 0; t < n_trials; ++t) {
        for (const std::size_t i : systematic_resample(w, n_out, rng.uniform())) {
            counts[i] += 1.0;
        }
    }
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    double chi2 = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double expected = n_trials * static_cast<double>(n_out) * w[i] / total;
        chi2 += (counts[i] - expected) * (counts[i] - expected) / expected;
    }
    const boost::math::chi_squared dist(static_cast<double>(w.size() - 1));
    return boost::math::cdf(boost::math::complement(dist, chi2));
}

}  // namespace

TEST_CASE("perturbation statistics") {
    const ThetaVector th{{{10, -3}, {20, 4}}, 150};
    CounterRng rng(1, 2);
    CHECK(perturb(th, 0.0, rng) == th);

    const int n = 100000;
    const auto base = th.flatten();
    std::vector<double> sum(base.size(), 0.0);
    std::vector<double> sq(base.size(), 0.0);
    for (int i = 0; i < n; ++i) {
        const auto f = perturb(th, 0.875, rng).flatten();
        for (std::size_t k = 0; k < f.size(); ++k) {
            sum[k] += f[k] - base[k];
            sq[k] += (f[k] - base[k]) * (f[k] - base[k]);
        }
    }
    for (std::size_t k = 0; k < base.size(); ++k) {
        const double mean = sum[k] / n;
        CHECK(std::abs(mean) < 3 * 0.875 / std::sqrt(static_cast<double>(n)));
        const double sd = std::sqrt(sq[k] / n - mean * mean);
        CHECK(sd == doctest::Approx(0.875).epsilon(0.02));
    }
}

TEST_CASE("systematic resampling examples") {
    const std::vector<double> one_hot{0, 0, 1, 0};
    for (const std::size_t i : systematic_resample(one_hot, 10, 0.37)) {
        CHECK(i == 2);
    }
    // Weights (1, 2, 1): averages over u0 give multiplicities (0.75, 1.5, 0.75).
    const std::vector<double> w{1, 2, 1};
    std::vector<double> m(3, 0.0);
    const int n = 10000;
    for (int k = 0; k < n; ++k) {
        for (const std::size_t i : systematic_resample(w, 3, (k + 0.5) / n)) {
            m[i] += 1.0 / n;
        }
    }
    CHECK(m[0] == doctest::Approx(0.75).epsilon(1e-3));
    CHECK(m[1] == doctest::Approx(1.5).epsilon(1e-3));
    CHECK(m[2] == doctest::Approx(0.75).epsilon(1e-3));

    const std::vector<double> zeros{0, 0, 0, 0};
    const auto u = systematic_resample(zeros, 4, 0.5);
    CHECK(u == std::vector<std::size_t>{0, 1, 2, 3});
}

TEST_CASE("property: resampling multiplicities pass chi-square") {
    const std::vector<double> uniform_w(16, 1.0);
    CHECK(resampling_p_value(uniform_w, 16, 10000, 3) > 0.01);
    CounterRng rng(4, 0);
    std::vector<double> w(25);
    for (auto& x : w) {
        x = rng.uniform() + 0.05;
    }
    CHECK(resampling_p_value(w, 25, 10000, 5) > 0.01);
    CHECK(resampling_p_value(w, 256, 10000, 6) > 0.01);
}

TEST_CASE("planner config validation") {
    PlannerConfig c;
    c.epsilon = 1.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = {};
    c.n_segments = 1;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = {};
    c.sigma_theta = 0.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = {};
    c.n_particles = 0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("open track plan follows the racing line") {
    const TrackModel oval = dbfma::testing::ring_track(150, 12, 35);
    const RacingLine& orl = oval.racing_line();
    const OrlState st = orl.state_at(100);
    const OrlState far = orl.state_at(600);
    PlanRequest req;
    req.ego_pos = st.position;
    req.ego_vel = st.velocity;
    req.ego_heading = heading_of(st.velocity);
    req.prediction = hold(far.position, {0, 0});
    req.s_f_target = 0.0;
    PlannerConfig cfg;
    cfg.delta_s_f = 0.0;
    const PlanResult r = plan(req, oval, {}, {}, cfg, {});
    REQUIRE(r.feasible());
    CHECK(r.iterations_used == 1);
    CHECK(r.breakdown.product >= 1 - cfg.epsilon);
    for (double t = 0; t <= 8.0; t += 0.1) {
        const Vec2 p = r.trajectory->position(t);
        CHECK(distance(p, orl.state_at(orl.project(p)).position) < 0.5);
    }
}

TEST_CASE("blocked corridor is infeasible") {
    const TrackModel corridor = dbfma::testing::straight_track(600, 3.0, 30);
    PlanRequest req;
    req.ego_pos = {50, 0};
    req.ego_vel = {30, 0};
    req.prediction = hold({120, 0}, {0, 0});
    req.s_f_target = 120;
    const PlannerConfig cfg;
    const PlanResult r = plan(req, corridor, {}, {}, cfg, {});
    CHECK_FALSE(r.feasible());
    CHECK_FALSE(r.trajectory.has_value());
    CHECK(r.iterations_used == cfg.n_iter);
    CHECK(r.breakdown.product < 1 - cfg.epsilon);
}

TEST_CASE("property: planner determinism, elitism and the returned-product guarantee") {
    const TrackModel oval = generate_track(TrackGenParams::defaults(TrackKind::oval));
    const RacingLine& orl = oval.racing_line();
    for (const double s0 : {50.0, 380.0, 820.0}) {
        const OrlState ego = orl.state_at(s0);
        // Slow target 12 m ahead.
        const double s_t = s0 + 12;
        std::vector<PredictedSample> samples;
        double s = s_t;
        for (int k = 0; k <= 160; ++k) {
            const OrlState o = orl.state_at(s);
            samples.push_back({k * 0.05, o.position, o.velocity * 0.7});
            s += 0.05 * 0.7 * norm(o.velocity);
        }
        PlanRequest req;
        req.ego_pos = ego.position;
        req.ego_vel = ego.velocity;
        req.ego_heading = heading_of(ego.velocity);
        req.prediction = PredictedTrajectory(samples);
        req.s_f_target = orl.wrap(s - 0.05 * 0.7 * norm(orl.state_at(s).velocity));
        PlannerConfig cfg;
        cfg.rng_seed = 99;
        cfg.epsilon = 1e-6;  // force all iterations
        const PlanResult a = plan(req, oval, {}, {}, cfg, {});
        const PlanResult b = plan(req, oval, {}, {}, cfg, {});
        CHECK(a.theta == b.theta);
        CHECK(a.best_history == b.best_history);
        CHECK(a.breakdown.product == b.breakdown.product);
        for (std::size_t i = 1; i < a.best_history.size(); ++i) {
            CHECK(a.best_history[i] >= a.best_history[i - 1]);
        }
        cfg.epsilon = 0.05;
        const PlanResult c = plan(req, oval, {}, {}, cfg, {});
        if (c.feasible()) {
            CHECK(c.breakdown.product >= 1 - cfg.epsilon);
            CHECK(orl.offset(req.s_f_target, c.theta.s_f_ego) >= cfg.delta_s_f - 1e-9);
        }
    }
}
