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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>

#include "dbfma/errors.hpp"
#include "dbfma/segment_grid.hpp"
#include "dbfma/track.hpp"
#include "dbfma/track_gen.hpp"
#include "dbfma/track_io.hpp"
#include "fixtures.hpp"

using namespace dbfma;
using dbfma::testing::uniform;

namespace {

// Omega by brute force: winding numbers for membership, all edges for distance.
// Open tracks enclose left + reversed right as one polygon.
double brute_omega(const TrackModel& t, const Vec2& x) {
    auto edge_dist = [&](std::span<const Vec2> loop) {
        double d = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < loop.size(); ++i) {
            d = std::min(d, point_segment_distance(x, loop[i], loop[(i + 1) % loop.size()]));
        }
        return d;
    };
    if (!t.closed()) {
        std::vector<Vec2> poly(t.inner().begin(), t.inner().end());
        poly.insert(poly.end(), t.outer().rbegin(), t.outer().rend());
        const double d = edge_dist(poly);
        return d == 0.0 || winding_number(poly, x) != 0 ? 0.0 : d;
    }
    const bool in_outer = winding_number(t.outer(), x) != 0;
    const bool in_inner = winding_number(t.inner(), x) != 0;
    const double d = std::min(edge_dist(t.inner()), edge_dist(t.outer()));
    if (d == 0.0) {
        return 0.0;
    }
    return in_outer && !in_inner ? 0.0 : d;
}

// U-turn: out along y = 0, a semicircle of radius 5, back along y = 10.
RacingLine hairpin() {
    std::vector<OrlSample> s;
    double arc = 0.0;
    auto push = [&](Vec2 p, Vec2 v) {
        if (!s.empty()) {
            arc += distance(s.back().position, p);
        }
        s.push_back({arc, p, v});
    };
    for (int i = 0; i <= 100; ++i) {
        push({static_cast<double>(i), 0.0}, {10, 0});
    }
    for (int k = 1; k < 60; ++k) {
        const double a = -std::numbers::pi / 2 + std::numbers::pi * k / 60.0;
        push({100 + 5 * std::cos(a), 5 + 5 * std::sin(a)}, {-10 * std::sin(a), 10 * std::cos(a)});
    }
    for (int i = 100; i >= 0; --i) {
        push({static_cast<double>(i), 10.0}, {-10, 0});
    }
    return RacingLine(std::move(s), arc, false);
}

}  // namespace

TEST_CASE("racing line state lookup") {
    const RacingLine orl = dbfma::testing::straight_line(100, 20);
    const OrlState a = orl.state_at(10.0);
    CHECK(a.position == Vec2{10, 0});
    CHECK(a.velocity == Vec2{20, 0});
    const OrlState mid = orl.state_at(10.5);
    CHECK(mid.position.x == doctest::Approx(10.5));

    const RacingLine circ = dbfma::testing::circle_line(50, 10, 500);
    const OrlState z = circ.state_at(0.0);
    const OrlState l = circ.state_at(circ.total_length());
    CHECK(distance(z.position, l.position) < 1e-12);
    CHECK(circ.wrap(circ.total_length() + 3) == doctest::Approx(3.0));
    CHECK(circ.wrap(-3) == doctest::Approx(circ.total_length() - 3));
    CHECK(circ.offset(circ.total_length() - 5, 2) == doctest::Approx(7.0));
    CHECK(circ.offset(2, circ.total_length() - 5) == doctest::Approx(-7.0));
}

TEST_CASE("racing line rejects bad samples") {
    std::vector<OrlSample> s{{0, {0, 0}, {1, 0}}, {0, {1, 0}, {1, 0}}};
    CHECK_THROWS_AS(RacingLine(s, 1, false), ConfigError);
    std::vector<OrlSample> far{{0, {0, 0}, {1, 0}}, {1, {3, 0}, {1, 0}}};
    CHECK_THROWS_AS(RacingLine(far, 1, false), ConfigError);
    std::vector<OrlSample> skew{{0, {0, 0}, {0, 1}}, {1, {1, 0}, {0, 1}}};
    CHECK_THROWS_AS(RacingLine(skew, 1, false), ConfigError);
}

TEST_CASE("projection onto the racing line") {
    const TrackModel oval = generate_track(TrackGenParams::defaults(TrackKind::oval));
    const RacingLine& orl = oval.racing_line();
    const auto samples = orl.samples();
    for (std::size_t i = 0; i < samples.size(); i += 97) {
        CHECK(orl.project(samples[i].position) == doctest::Approx(samples[i].s).epsilon(1e-12));
    }
    // Offset along the local normal; compare with a dense argmin.
    CounterRng rng(31, 0);
    for (int trial = 0; trial < 200; ++trial) {
        const double s = uniform(rng, 0, orl.total_length());
        const OrlState st = orl.state_at(s);
        const Vec2 x = st.position + normalized(perp(st.velocity)) * (trial % 2 ? 2.0 : -2.0);
        double best_s = 0.0;
        double best_d = std::numeric_limits<double>::infinity();
        for (double q = 0.0; q < orl.total_length(); q += 0.01) {
            const double d = distance(orl.state_at(q).position, x);
            if (d < best_d) {
                best_d = d;
                best_s = q;
            }
        }
        CHECK(std::abs(orl.offset(best_s, orl.project(x))) <= orl.max_spacing());
    }
}

TEST_CASE("projection ties resolve to the smaller arc length") {
    const RacingLine orl = hairpin();
    CHECK(orl.project({50, 5}) == doctest::Approx(50.0));
    CHECK(orl.project({20, 5}) == doctest::Approx(20.0));
}

TEST_CASE("distance to drivable examples") {
    const TrackModel oval = generate_track(TrackGenParams::defaults(TrackKind::oval));
    // Lower straight: racing line on y = 0, 12 m wide.
    CHECK(oval.distance_to_drivable({200, 0}) == 0.0);
    CHECK(oval.distance_to_drivable({200, -7.5}) == doctest::Approx(1.5).epsilon(1e-9));
    CHECK(oval.distance_to_drivable({200, 7.5}) == doctest::Approx(1.5).epsilon(1e-9));
    CHECK(oval.distance_to_drivable(oval.outer()[17]) == 0.0);
    CHECK(oval.distance_to_drivable(oval.inner()[5]) == 0.0);
    for (const auto& s : oval.racing_line().samples()) {
        CHECK(oval.distance_to_drivable(s.position) == 0.0);
    }
}

TEST_CASE("property: omega matches the brute-force oracle") {
    for (const TrackKind kind : {TrackKind::oval, TrackKind::chicane, TrackKind::straight}) {
        const TrackModel t = generate_track(TrackGenParams::defaults(kind));
        CounterRng rng(41, static_cast<std::uint64_t>(kind));
        const RacingLine& orl = t.racing_line();
        for (int trial = 0; trial < 1500; ++trial) {
            const OrlState st = orl.state_at(uniform(rng, 0, orl.total_length()));
            const Vec2 x = st.position + Vec2{uniform(rng, -25, 25), uniform(rng, -25, 25)};
            CHECK(t.distance_to_drivable(x) == doctest::Approx(brute_omega(t, x)).epsilon(1e-9));
        }
    }
}

TEST_CASE("property: segment grid nearest equals brute force") {
    CounterRng rng(51, 0);
    std::vector<Segment> segs;
    for (int i = 0; i < 400; ++i) {
        const Vec2 a{uniform(rng, -300, 300), uniform(rng, -300, 300)};
        segs.push_back({a, a + Vec2{uniform(rng, -30, 30), uniform(rng, -30, 30)}});
    }
    const SegmentGrid grid(segs, 10.0);
    for (int q = 0; q < 2000; ++q) {
        const Vec2 p{uniform(rng, -500, 500), uniform(rng, -500, 500)};
        double best = std::numeric_limits<double>::infinity();
        for (const auto& s : segs) {
            best = std::min(best, point_segment_distance(p, s.a, s.b));
        }
        CHECK(grid.nearest(p).distance == doctest::Approx(best).epsilon(1e-12));
    }
}

TEST_CASE("loop helpers") {
    const std::vector<Vec2> square{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    const std::vector<Vec2> bowtie{{0, 0}, {1, 1}, {1, 0}, {0, 1}};
    CHECK(is_simple_loop(square));
    CHECK_FALSE(is_simple_loop(bowtie));
    CHECK(winding_number(square, {0.5, 0.5}) != 0);
    CHECK(winding_number(square, {1.5, 0.5}) == 0);
}

TEST_CASE("track model rejects self-intersecting boundaries") {
    const RacingLine orl = dbfma::testing::circle_line(50, 10, 400);
    std::vector<Vec2> outer = dbfma::testing::circle_loop(55, 400);
    std::swap(outer[10], outer[200]);
    CHECK_THROWS_AS(TrackModel("bad", dbfma::testing::circle_loop(45, 400), outer, orl), ConfigError);
    // Racing line outside the region.
    CHECK_THROWS_AS(TrackModel("bad", dbfma::testing::circle_loop(20, 400), dbfma::testing::circle_loop(30, 400), orl),
                    ConfigError);
}

TEST_CASE("track files round-trip") {
    const auto dir = std::filesystem::temp_directory_path() / "dbfma_track_io_test";
    std::filesystem::remove_all(dir);
    const TrackModel chicane = generate_track(TrackGenParams::defaults(TrackKind::chicane));
    const auto manifest = save_track(chicane, dir);
    const TrackModel back = load_track(manifest);
    CHECK(back.name() == chicane.name());
    CHECK(back.closed());
    REQUIRE(back.racing_line().samples().size() == chicane.racing_line().samples().size());
    for (std::size_t i = 0; i < back.racing_line().samples().size(); i += 13) {
        const auto& a = back.racing_line().samples()[i];
        const auto& b = chicane.racing_line().samples()[i];
        CHECK(a.s == b.s);
        CHECK(a.position == b.position);
        CHECK(a.velocity == b.velocity);
    }
    CHECK(back.racing_line().total_length() == chicane.racing_line().total_length());

    std::ofstream(dir / "orl.csv") << "s,x,y\n0,0,0\n";
    CHECK_THROWS_AS(load_track(manifest), ConfigError);
    CHECK_THROWS_AS(load_track(dir / "missing.json"), ConfigError);
    std::filesystem::remove_all(dir);
}
