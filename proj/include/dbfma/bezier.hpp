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

#include <array>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "dbfma/vec2.hpp"

namespace dbfma {

/// Trajectories are built from cubic segments only.
inline constexpr int kCubic = 3;

/// b_{i,k}(u) = C(k,i) (1-u)^(k-i) u^i. Throws std::domain_error outside 0<=i<=k, 0<=u<=1.
double bernstein_basis(int i, int k, double u);

/// A Bezier segment of degree <= 3 over a time span of `duration` seconds.
/// Degrees below 3 only arise as hodographs of cubics.
class BezierSegment {
public:
    static constexpr std::size_t kMaxPoints = kCubic + 1;

    BezierSegment() = default;
    BezierSegment(std::span<const Vec2> control_points, double duration);
    BezierSegment(std::initializer_list<Vec2> control_points, double duration)
        : BezierSegment(std::span<const Vec2>(control_points.begin(), control_points.size()), duration) {}

    [[nodiscard]] int degree() const { return static_cast<int>(count_) - 1; }
    [[nodiscard]] double duration() const { return duration_; }
    [[nodiscard]] std::span<const Vec2> control_points() const { return {points_.data(), count_}; }
    [[nodiscard]] const Vec2& operator[](std::size_t i) const { return points_[i]; }

    /// P(u) as a Bernstein combination; throws std::domain_error for u outside [0, 1].
    [[nodiscard]] Vec2 eval(double u) const;

    /// Hodograph dP/du: degree k-1 with control points k (C_{i+1} - C_i).
    /// Divide its values by duration() for d/dt. Throws std::domain_error for degree 0.
    [[nodiscard]] BezierSegment derivative() const;

private:
    std::array<Vec2, kMaxPoints> points_{};
    std::size_t count_ = 0;
    double duration_ = 1.0;
};

/// A C1 spline of equal-duration cubic segments over [t0, t0 + horizon].
class CompositeBezier {
public:
    CompositeBezier() = default;
    /// Throws std::invalid_argument if segments are not cubic, durations differ,
    /// or the C0/C1 joint conditions fail.
    explicit CompositeBezier(std::vector<BezierSegment> segments, double t0 = 0.0);

    [[nodiscard]] std::size_t segment_count() const { return segments_.size(); }
    [[nodiscard]] const BezierSegment& segment(std::size_t i) const { return segments_[i]; }
    [[nodiscard]] std::span<const BezierSegment> segments() const { return segments_; }
    [[nodiscard]] double t0() const { return t0_; }
    [[nodiscard]] double segment_duration() const { return segments_.front().duration(); }
    [[nodiscard]] double horizon() const { return segment_duration() * static_cast<double>(segments_.size()); }
    [[nodiscard]] double t_end() const { return t0_ + horizon(); }

    /// order 0: position, 1: velocity, 2: acceleration. Throws std::domain_error
    /// outside [t0, t0 + horizon] or for other orders.
    [[nodiscard]] Vec2 eval(double t, int order = 0) const;
    [[nodiscard]] Vec2 position(double t) const { return eval(t, 0); }
    [[nodiscard]] Vec2 velocity(double t) const { return eval(t, 1); }
    [[nodiscard]] Vec2 acceleration(double t) const { return eval(t, 2); }

    /// Evaluates the given segment at local parameter u; left/right joint checks use this.
    [[nodiscard]] Vec2 eval_segment(std::size_t index, double u, int order) const;

private:
    std::vector<BezierSegment> segments_;
    double t0_ = 0.0;
};

}  // namespace dbfma
