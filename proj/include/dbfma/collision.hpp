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
#include <span>
#include <vector>

#include "dbfma/bezier.hpp"
#include "dbfma/vec2.hpp"

namespace dbfma {

/// Full vehicle length and width in meters.
struct VehicleDims {
    double length = 5.0;
    double width = 1.9;

    [[nodiscard]] double half_length() const { return 0.5 * length; }
    [[nodiscard]] double half_width() const { return 0.5 * width; }
    /// Throws ConfigError unless both are positive.
    void validate() const;
};

struct OrientedRect {
    Vec2 center;
    double heading = 0.0;
    double half_length = 0.0;
    double half_width = 0.0;

    /// Unit vectors along the length and width.
    [[nodiscard]] Vec2 axis_long() const { return unit_from_heading(heading); }
    [[nodiscard]] Vec2 axis_lat() const { return perp(axis_long()); }
    /// Counter-clockwise from the front-right corner.
    [[nodiscard]] std::array<Vec2, 4> corners() const;
};

struct PredictedSample {
    double t = 0.0;
    Vec2 position;
    Vec2 velocity;
};

/// Time-indexed opponent states, optionally with isotropic position uncertainty.
class PredictedTrajectory {
public:
    PredictedTrajectory() = default;
    /// Throws std::invalid_argument unless t is strictly increasing and sigma >= 0.
    explicit PredictedTrajectory(std::vector<PredictedSample> samples, double position_sigma = 0.0);

    [[nodiscard]] std::span<const PredictedSample> samples() const { return samples_; }
    [[nodiscard]] double position_sigma() const { return sigma_; }
    [[nodiscard]] double start_time() const { return samples_.front().t; }
    [[nodiscard]] double end_time() const { return samples_.back().t; }
    [[nodiscard]] bool covers(double t0, double t1) const;

    /// Linear interpolation; throws std::domain_error outside the sampled span.
    [[nodiscard]] PredictedSample state_at(double t) const;

private:
    std::vector<PredictedSample> samples_;
    double sigma_ = 0.0;
};

/// Rectangle centered at position, aligned with velocity. Falls back to
/// `fallback_heading` when |velocity| <= kMinHeadingSpeed.
OrientedRect footprint_at(const Vec2& position, const Vec2& velocity, const VehicleDims& dims,
                          double fallback_heading = 0.0);
/// Throws std::domain_error when t is outside the trajectory horizon.
OrientedRect footprint_at(const CompositeBezier& traj, double t, const VehicleDims& dims,
                          double fallback_heading = 0.0);
OrientedRect footprint_at(const PredictedTrajectory& traj, double t, const VehicleDims& dims,
                          double fallback_heading = 0.0);

/// Positive: boundary-to-boundary distance. Negative: the smallest interval
/// overlap over the four candidate axes, negated. Zero at contact.
double rect_separation(const OrientedRect& a, const OrientedRect& b);

/// Exact intersection test (closed sets) by edge crossings and containment.
bool rects_intersect(const OrientedRect& a, const OrientedRect& b);

inline constexpr double kDefaultSigmaCa = 0.25;
inline constexpr double kDefaultLMax = 1.0 - 1e-3;

struct CollisionModel {
    double sigma_ca = kDefaultSigmaCa;
    double l_max = kDefaultLMax;
};

/// Standard normal CDF.
double normal_cdf(double x);

/// target_sigma == 0: Phi(-sep / sigma_ca). target_sigma > 0: probability that
/// the target displaced by N(0, sigma^2 I) overlaps the ego rectangle. Both
/// are clamped to [0, l_max].
double instantaneous_collision_prob(const OrientedRect& ego, const OrientedRect& target, double target_sigma,
                                    const CollisionModel& model = {});

/// Probability that a standard-normal point lies in the convex polygon
/// (vertices in either orientation). Gauss-Legendre over x, exact in y.
double gaussian_polygon_mass(std::span<const Vec2> convex_polygon);

/// Convex hull, counter-clockwise, collinear points dropped.
std::vector<Vec2> convex_hull(std::vector<Vec2> points);

}  // namespace dbfma
