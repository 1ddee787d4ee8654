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

#include "dbfma/track_gen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dbfma/errors.hpp"

namespace dbfma {

namespace {

constexpr double kDenseStep = 0.05;
constexpr double kPi = std::numbers::pi;

// Densely sampled centerline in driving order; closed loops omit the repeat.
std::vector<Vec2> dense_centerline(const TrackGenParams& p) {
    std::vector<Vec2> pts;
    const double l = p.straight_length;
    const double r = p.radius;
    auto line = [&](const Vec2& a, const Vec2& b, auto&& offset) {
        const auto n = static_cast<std::size_t>(std::ceil(distance(a, b) / kDenseStep));
        for (std::size_t i = 0; i < n; ++i) {
            const double f = static_cast<double>(i) / static_cast<double>(n);
            pts.push_back(lerp(a, b, f) + offset(f * distance(a, b)));
        }
    };
    auto arc = [&](const Vec2& c, double a0) {
        const auto n = static_cast<std::size_t>(std::ceil(kPi * r / kDenseStep));
        for (std::size_t i = 0; i < n; ++i) {
            const double a = a0 + kPi * static_cast<double>(i) / static_cast<double>(n);
            pts.push_back(c + unit_from_heading(a) * r);
        }
    };
    auto flat = [](double) { return Vec2{}; };

    switch (p.kind) {
        case TrackKind::straight:
            line(Vec2{0.0, 0.0}, Vec2{l, 0.0}, flat);
            pts.push_back({l, 0.0});
            break;
        case TrackKind::oval:
        case TrackKind::chicane: {
            // Lower straight eastbound, then counter-clockwise.
            const double start = 0.5 * (l - p.bump_length);
            auto bump = [&](double x) {
                if (p.kind != TrackKind::chicane || x < start || x > start + p.bump_length) {
                    return Vec2{};
                }
                const double phase = 2.0 * kPi * (x - start) / p.bump_length;
                return Vec2{0.0, -0.5 * p.bump_amplitude * (1.0 - std::cos(phase))};
            };
            line(Vec2{0.0, 0.0}, Vec2{l, 0.0}, bump);
            arc(Vec2{l, r}, -0.5 * kPi);
            line(Vec2{l, 2.0 * r}, Vec2{0.0, 2.0 * r}, flat);
            arc(Vec2{0.0, r}, 0.5 * kPi);
            break;
        }
    }
    return pts;
}

// Uniform arc-length resampling, count chosen so spacing is close to `step`.
std::vector<Vec2> resample(const std::vector<Vec2>& dense, bool closed, double step, double& length) {
    std::vector<double> cum(dense.size() + (closed ? 1 : 0), 0.0);
    for (std::size_t i = 1; i < cum.size(); ++i) {
        cum[i] = cum[i - 1] + distance(dense[i - 1], dense[i % dense.size()]);
    }
    length = cum.back();
    const auto n = std::max<std::size_t>(4, static_cast<std::size_t>(std::lround(length / step)));
    const std::size_t count = closed ? n : n + 1;
    std::vector<Vec2> out(count);
    std::size_t j = 0;
    for (std::size_t k = 0; k < count; ++k) {
        const double s = length * static_cast<double>(k) / static_cast<double>(n);
        while (j + 2 < cum.size() && cum[j + 1] < s) {
            ++j;
        }
        const double seg = cum[j + 1] - cum[j];
        const double f = seg > 0.0 ? std::clamp((s - cum[j]) / seg, 0.0, 1.0) : 0.0;
        out[k] = lerp(dense[j], dense[(j + 1) % dense.size()], f);
    }
    return out;
}

// Signed curvature of the circle through three points.
double menger_curvature(const Vec2& a, const Vec2& b, const Vec2& c) {
    const double denom = distance(a, b) * distance(b, c) * distance(a, c);
    return denom > 0.0 ? 2.0 * cross(b - a, c - a) / denom : 0.0;
}

}  // namespace

TrackKind parse_track_kind(const std::string& name) {
    if (name == "oval") {
        return TrackKind::oval;
    }
    if (name == "chicane") {
        return TrackKind::chicane;
    }
    if (name == "straight") {
        return TrackKind::straight;
    }
    throw ConfigError("unknown track kind '" + name + "' (expected oval, chicane or straight)");
}

std::string to_string(TrackKind kind) {
    switch (kind) {
        case TrackKind::oval:
            return "oval";
        case TrackKind::chicane:
            return "chicane";
        case TrackKind::straight:
            return "straight";
    }
    return "oval";
}

TrackGenParams TrackGenParams::defaults(TrackKind kind) {
    TrackGenParams p;
    p.kind = kind;
    p.name = to_string(kind);
    if (kind == TrackKind::chicane) {
        p.radius = 60.0;
    }
    if (kind == TrackKind::straight) {
        p.straight_length = 600.0;
    }
    return p;
}

void TrackGenParams::validate() const {
    if (!(straight_length > 0.0 && width > 0.0 && v_cap > 0.0 && spacing > 0.0)) {
        throw ConfigError("gen-track: dimensions, v_cap and spacing must be positive");
    }
    if (!(grip_fraction > 0.0 && grip_fraction <= 1.0)) {
        throw ConfigError("gen-track: grip_fraction must lie in (0, 1]");
    }
    if (kind == TrackKind::straight) {
        return;
    }
    if (!(radius > 0.5 * width)) {
        throw ConfigError("gen-track: radius must exceed half the track width");
    }
    if (kind == TrackKind::chicane) {
        if (!(bump_length > 0.0 && bump_length <= straight_length && bump_amplitude >= 0.0)) {
            throw ConfigError("gen-track: chicane bump must fit on the straight");
        }
    }
}

double curvature_speed_limit(double kappa, double v_cap, const std::function<double(double)>& a_lat_limit) {
    const double k = std::abs(kappa);
    if (k < 1e-12) {
        return v_cap;
    }
    double v = std::min(v_cap, std::sqrt(std::max(a_lat_limit(0.0), 0.0) / k));
    for (int i = 0; i < 200; ++i) {
        const double next = std::min(v_cap, std::sqrt(std::max(a_lat_limit(v), 0.0) / k));
        if (std::abs(next - v) < 1e-12) {
            return next;
        }
        v = next;
    }
    return v;
}

double usable_lateral_accel(double v, const TractionSchedule& sched, double grip_fraction) {
    const Ellipse e = ellipse_at(v, sched);
    const double r = e.center_lon / e.semi_lon;
    return grip_fraction * e.semi_lat * std::sqrt(std::max(0.0, 1.0 - r * r));
}

std::vector<double> speed_profile(const SpeedProfileInput& in, const TractionSchedule& sched, double v_cap,
                                  double grip_fraction) {
    const std::size_t n = in.curvature.size();
    std::vector<double> limit(n);
    for (std::size_t i = 0; i < n; ++i) {
        limit[i] = curvature_speed_limit(in.curvature[i], v_cap,
                                         [&](double v) { return usable_lateral_accel(v, sched, grip_fraction); });
    }
    // Longitudinal acceleration left over at (v, kappa), scaled by grip_fraction.
    auto available = [&](double v, double kappa, bool drive) {
        const Ellipse e = ellipse_at(v, sched);
        const double q = v * v * kappa / e.semi_lat;
        const double room = e.semi_lon * std::sqrt(std::max(0.0, 1.0 - q * q));
        return grip_fraction * (drive ? e.center_lon + room : e.center_lon - room);
    };
    std::vector<double> v = limit;
    const int rounds = in.closed ? 2 : 1;
    for (int r = 0; r < rounds; ++r) {
        const std::size_t span = in.closed ? n : n - 1;
        for (std::size_t k = 0; k < span; ++k) {
            const std::size_t i = k;
            const std::size_t j = (k + 1) % n;
            const double a = std::max(available(v[i], in.curvature[i], true), 0.0);
            v[j] = std::min(v[j], std::sqrt(v[i] * v[i] + 2.0 * a * in.ds[i]));
        }
        for (std::size_t k = span; k-- > 0;) {
            const std::size_t i = k;
            const std::size_t j = (k + 1) % n;
            const double b = std::abs(std::min(available(v[j], in.curvature[j], false), 0.0));
            v[i] = std::min(v[i], std::sqrt(v[j] * v[j] + 2.0 * b * in.ds[i]));
        }
    }
    return v;
}

TrackModel generate_track(const TrackGenParams& params, const TractionSchedule& sched) {
    params.validate();
    sched.validate();
    const bool closed = params.kind != TrackKind::straight;
    double length = 0.0;
    const std::vector<Vec2> pts = resample(dense_centerline(params), closed, params.spacing, length);
    const std::size_t n = pts.size();

    auto at = [&](std::ptrdiff_t i) {
        const auto m = static_cast<std::ptrdiff_t>(n);
        if (closed) {
            return pts[static_cast<std::size_t>(((i % m) + m) % m)];
        }
        return pts[static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(i, 0, m - 1))];
    };
    SpeedProfileInput prof;
    prof.closed = closed;
    prof.ds.resize(n);
    prof.curvature.resize(n);
    std::vector<Vec2> tangent(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto k = static_cast<std::ptrdiff_t>(i);
        prof.ds[i] = distance(at(k), at(k + 1));
        tangent[i] = normalized(at(k + 1) - at(k - 1));
        const bool end = !closed && (i == 0 || i + 1 == n);
        prof.curvature[i] = end ? 0.0 : menger_curvature(at(k - 1), at(k), at(k + 1));
    }
    const std::vector<double> speed = speed_profile(prof, sched, params.v_cap, params.grip_fraction);

    std::vector<OrlSample> samples(n);
    std::vector<Vec2> inner(n);
    std::vector<Vec2> outer(n);
    const double half = 0.5 * params.width;
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        samples[i] = {s, pts[i], tangent[i] * speed[i]};
        inner[i] = pts[i] + perp(tangent[i]) * half;
        outer[i] = pts[i] - perp(tangent[i]) * half;
        s += prof.ds[i];
    }
    const double total = closed ? s : samples.back().s;
    const std::string name = params.name.empty() ? to_string(params.kind) : params.name;
    return TrackModel(name, std::move(inner), std::move(outer), RacingLine(std::move(samples), total, closed));
}

}  // namespace dbfma
