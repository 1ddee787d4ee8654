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

#include "dbfma/collision.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "dbfma/errors.hpp"
#include "dbfma/quadrature.hpp"
#include "dbfma/vehicle_dynamics.hpp"

namespace dbfma {

namespace {

struct Interval {
    double lo;
    double hi;
};

Interval project(const std::array<Vec2, 4>& pts, const Vec2& axis) {
    Interval iv{dot(pts[0], axis), dot(pts[0], axis)};
    for (std::size_t i = 1; i < pts.size(); ++i) {
        const double d = dot(pts[i], axis);
        iv.lo = std::min(iv.lo, d);
        iv.hi = std::max(iv.hi, d);
    }
    return iv;
}

double squared_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
    return squared_norm(p - lerp(a, b, closest_segment_param(p, a, b)));
}

double boundary_distance(const std::array<Vec2, 4>& a, const std::array<Vec2, 4>& b) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            best = std::min(best, squared_segment_distance(a[i], b[j], b[(j + 1) % 4]));
            best = std::min(best, squared_segment_distance(b[i], a[j], a[(j + 1) % 4]));
        }
    }
    return std::sqrt(best);
}

bool segments_cross(const Vec2& p0, const Vec2& p1, const Vec2& q0, const Vec2& q1) {
    auto orient = [](const Vec2& a, const Vec2& b, const Vec2& c) { return cross(b - a, c - a); };
    auto on_segment = [](const Vec2& a, const Vec2& b, const Vec2& c) {
        return std::min(a.x, b.x) <= c.x && c.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= c.y &&
               c.y <= std::max(a.y, b.y);
    };
    const double d1 = orient(q0, q1, p0);
    const double d2 = orient(q0, q1, p1);
    const double d3 = orient(p0, p1, q0);
    const double d4 = orient(p0, p1, q1);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
        return true;
    }
    return (d1 == 0 && on_segment(q0, q1, p0)) || (d2 == 0 && on_segment(q0, q1, p1)) ||
           (d3 == 0 && on_segment(p0, p1, q0)) || (d4 == 0 && on_segment(p0, p1, q1));
}

bool contains(const OrientedRect& r, const Vec2& p) {
    const Vec2 d = p - r.center;
    return std::abs(dot(d, r.axis_long())) <= r.half_length && std::abs(dot(d, r.axis_lat())) <= r.half_width;
}

}  // namespace

void VehicleDims::validate() const {
    if (!(length > 0.0 && width > 0.0)) {
        throw ConfigError("vehicle dimensions must be positive");
    }
}

std::array<Vec2, 4> OrientedRect::corners() const {
    const Vec2 l = axis_long() * half_length;
    const Vec2 w = axis_lat() * half_width;
    return {center + l - w, center + l + w, center - l + w, center - l - w};
}

PredictedTrajectory::PredictedTrajectory(std::vector<PredictedSample> samples, double position_sigma)
    : samples_(std::move(samples)), sigma_(position_sigma) {
    if (samples_.empty()) {
        throw std::invalid_argument("PredictedTrajectory: no samples");
    }
    for (std::size_t i = 1; i < samples_.size(); ++i) {
        if (!(samples_[i].t > samples_[i - 1].t)) {
            throw std::invalid_argument("PredictedTrajectory: sample times must be strictly increasing");
        }
    }
    if (!(position_sigma >= 0.0)) {
        throw std::invalid_argument("PredictedTrajectory: position sigma must be non-negative");
    }
}

bool PredictedTrajectory::covers(double t0, double t1) const {
    constexpr double kSlack = 1e-9;
    return !samples_.empty() && start_time() <= t0 + kSlack && end_time() >= t1 - kSlack;
}

PredictedSample PredictedTrajectory::state_at(double t) const {
    constexpr double kSlack = 1e-9;
    if (samples_.empty() || t < start_time() - kSlack || t > end_time() + kSlack) {
        throw std::domain_error("PredictedTrajectory: time outside the predicted span");
    }
    if (t <= start_time()) {
        return samples_.front();
    }
    if (t >= end_time()) {
        return samples_.back();
    }
    const auto it =
        std::upper_bound(samples_.begin(), samples_.end(), t, [](double v, const PredictedSample& s) { return v < s.t; });
    const PredictedSample& hi = *it;
    const PredictedSample& lo = *(it - 1);
    const double f = (t - lo.t) / (hi.t - lo.t);
    return {t, lerp(lo.position, hi.position, f), lerp(lo.velocity, hi.velocity, f)};
}

OrientedRect footprint_at(const Vec2& position, const Vec2& velocity, const VehicleDims& dims,
                          double fallback_heading) {
    const double heading = norm(velocity) > kMinHeadingSpeed ? heading_of(velocity) : fallback_heading;
    return {position, normalize_angle(heading), dims.half_length(), dims.half_width()};
}

OrientedRect footprint_at(const CompositeBezier& traj, double t, const VehicleDims& dims, double fallback_heading) {
    return footprint_at(traj.position(t), traj.velocity(t), dims, fallback_heading);
}

OrientedRect footprint_at(const PredictedTrajectory& traj, double t, const VehicleDims& dims,
                          double fallback_heading) {
    const PredictedSample s = traj.state_at(t);
    return footprint_at(s.position, s.velocity, dims, fallback_heading);
}

double rect_separation(const OrientedRect& a, const OrientedRect& b) {
    const auto ca = a.corners();
    const auto cb = b.corners();
    const std::array<Vec2, 4> axes{a.axis_long(), a.axis_lat(), b.axis_long(), b.axis_lat()};
    double min_overlap = std::numeric_limits<double>::infinity();
    for (const Vec2& axis : axes) {
        const Interval pa = project(ca, axis);
        const Interval pb = project(cb, axis);
        const double overlap = std::min(pa.hi, pb.hi) - std::max(pa.lo, pb.lo);
        if (overlap < 0.0) {
            return boundary_distance(ca, cb);
        }
        min_overlap = std::min(min_overlap, overlap);
    }
    return -min_overlap;
}

bool rects_intersect(const OrientedRect& a, const OrientedRect& b) {
    const auto ca = a.corners();
    const auto cb = b.corners();
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            if (segments_cross(ca[i], ca[(i + 1) % 4], cb[j], cb[(j + 1) % 4])) {
                return true;
            }
        }
    }
    return contains(a, cb[0]) || contains(b, ca[0]);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

std::vector<Vec2> convex_hull(std::vector<Vec2> points) {
    std::sort(points.begin(), points.end(), [](const Vec2& p, const Vec2& q) {
        return p.x < q.x || (p.x == q.x && p.y < q.y);
    });
    points.erase(std::unique(points.begin(), points.end()), points.end());
    if (points.size() < 3) {
        return points;
    }
    std::vector<Vec2> hull(2 * points.size());
    std::size_t k = 0;
    for (const Vec2& p : points) {
        while (k >= 2 && cross(hull[k - 1] - hull[k - 2], p - hull[k - 2]) <= 0.0) {
            --k;
        }
        hull[k++] = p;
    }
    const std::size_t lower = k + 1;
    for (auto it = points.rbegin() + 1; it != points.rend(); ++it) {
        while (k >= lower && cross(hull[k - 1] - hull[k - 2], *it - hull[k - 2]) <= 0.0) {
            --k;
        }
        hull[k++] = *it;
    }
    hull.resize(k - 1);
    return hull;
}

double gaussian_polygon_mass(std::span<const Vec2> poly) {
    constexpr double kTail = 8.0;
    constexpr double kMaxPanel = 1.0;
    constexpr std::size_t kNodes = 8;
    static const QuadratureRule unit = gauss_legendre(kNodes, 0.0, 1.0);
    if (poly.size() < 3) {
        return 0.0;
    }
    const std::size_t n = poly.size();

    // Vertical extent of the polygon at abscissa x.
    auto chord = [&](double x) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (std::size_t i = 0; i < n; ++i) {
            const Vec2& p = poly[i];
            const Vec2& q = poly[(i + 1) % n];
            const double x0 = std::min(p.x, q.x);
            const double x1 = std::max(p.x, q.x);
            if (x < x0 || x > x1 || x1 == x0) {
                continue;
            }
            const double y = p.y + (q.y - p.y) * (x - p.x) / (q.x - p.x);
            lo = std::min(lo, y);
            hi = std::max(hi, y);
        }
        return std::pair{lo, hi};
    };

    std::vector<double> breaks;
    breaks.reserve(n);
    for (const Vec2& p : poly) {
        breaks.push_back(std::clamp(p.x, -kTail, kTail));
    }
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

    double mass = 0.0;
    for (std::size_t b = 0; b + 1 < breaks.size(); ++b) {
        const double a0 = breaks[b];
        const double a1 = breaks[b + 1];
        const auto panels = static_cast<std::size_t>(std::ceil((a1 - a0) / kMaxPanel));
        const double w = (a1 - a0) / static_cast<double>(panels);
        for (std::size_t p = 0; p < panels; ++p) {
            const double x0 = a0 + w * static_cast<double>(p);
            for (std::size_t k = 0; k < kNodes; ++k) {
                const double x = x0 + w * unit.nodes[k];
                const auto [lo, hi] = chord(x);
                if (!(hi > lo)) {
                    continue;
                }
                const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
                mass += w * unit.weights[k] * pdf * (normal_cdf(hi) - normal_cdf(lo));
            }
        }
    }
    return std::clamp(mass, 0.0, 1.0);
}

double instantaneous_collision_prob(const OrientedRect& ego, const OrientedRect& target, double target_sigma,
                                    const CollisionModel& model) {
    double l = 0.0;
    if (target_sigma > 0.0) {
        // Target centers that overlap the ego form ego (+) target-shape; shift
        // to the predicted center and whiten.
        const auto ce = ego.corners();
        const auto ct = target.corners();
        std::vector<Vec2> sums;
        sums.reserve(16);
        for (const Vec2& e : ce) {
            for (const Vec2& t : ct) {
                sums.push_back((e + (t - target.center) - target.center) / target_sigma);
            }
        }
        l = gaussian_polygon_mass(convex_hull(std::move(sums)));
    } else {
        // Beyond 40 sigma the normal tail is below the smallest double.
        const double reach = std::hypot(ego.half_length, ego.half_width) + std::hypot(target.half_length, target.half_width);
        if (distance(ego.center, target.center) - reach > 40.0 * model.sigma_ca) {
            return 0.0;
        }
        l = normal_cdf(-rect_separation(ego, target) / model.sigma_ca);
    }
    return std::clamp(l, 0.0, model.l_max);
}

}  // namespace dbfma
