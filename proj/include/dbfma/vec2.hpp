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

#include <cmath>
#include <numbers>

namespace dbfma {

/// Planar vector in meters (positions) or m/s, m/s^2 (derivatives).
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2& operator+=(const Vec2& o) {
        x += o.x;
        y += o.y;
        return *this;
    }
    constexpr Vec2& operator-=(const Vec2& o) {
        x -= o.x;
        y -= o.y;
        return *this;
    }
    constexpr Vec2& operator*=(double s) {
        x *= s;
        y *= s;
        return *this;
    }

    friend constexpr bool operator==(const Vec2&, const Vec2&) = default;
};

constexpr Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
constexpr Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
constexpr Vec2 operator-(const Vec2& a) { return {-a.x, -a.y}; }
constexpr Vec2 operator*(Vec2 a, double s) { return a *= s; }
constexpr Vec2 operator*(double s, Vec2 a) { return a *= s; }
constexpr Vec2 operator/(const Vec2& a, double s) { return {a.x / s, a.y / s}; }

constexpr double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Vec2& a) { return std::hypot(a.x, a.y); }
constexpr double squared_norm(const Vec2& a) { return dot(a, a); }
inline double distance(const Vec2& a, const Vec2& b) { return norm(a - b); }

/// Counter-clockwise quarter turn.
constexpr Vec2 perp(const Vec2& a) { return {-a.y, a.x}; }

inline Vec2 normalized(const Vec2& a) {
    const double n = norm(a);
    return n > 0.0 ? a / n : Vec2{};
}

inline Vec2 unit_from_heading(double heading) { return {std::cos(heading), std::sin(heading)}; }

inline double heading_of(const Vec2& a) { return std::atan2(a.y, a.x); }

constexpr Vec2 lerp(const Vec2& a, const Vec2& b, double t) { return a + (b - a) * t; }

/// Wraps an angle into (-pi, pi].
inline double normalize_angle(double a) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    a = std::fmod(a, two_pi);
    if (a <= -std::numbers::pi) {
        a += two_pi;
    } else if (a > std::numbers::pi) {
        a -= two_pi;
    }
    return a;
}

/// Closest point on segment [a, b] to p, returned as the segment parameter in [0, 1].
inline double closest_segment_param(const Vec2& p, const Vec2& a, const Vec2& b) {
    const Vec2 ab = b - a;
    const double len2 = squared_norm(ab);
    if (len2 <= 0.0) {
        return 0.0;
    }
    const double t = dot(p - a, ab) / len2;
    return t < 0.0 ? 0.0 : (t > 1.0 ? 1.0 : t);
}

inline double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
    return distance(p, lerp(a, b, closest_segment_param(p, a, b)));
}

}  // namespace dbfma
