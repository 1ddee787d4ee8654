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

#include "dbfma/bezier.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dbfma {

namespace {

constexpr double kHorizonSlack = 1e-9;
constexpr double kJointTolerance = 1e-9;

constexpr std::array<std::array<double, 4>, 4> kBinomial{{
    {1, 0, 0, 0},
    {1, 1, 0, 0},
    {1, 2, 1, 0},
    {1, 3, 3, 1},
}};

double binomial(int k, int i) {
    if (k < static_cast<int>(kBinomial.size())) {
        return kBinomial[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
    }
    double c = 1.0;
    for (int j = 1; j <= i; ++j) {
        c = c * (k - i + j) / j;
    }
    return c;
}

// Bernstein sum of the r-th forward difference of the control points, without
// range checks. Returns d^r P / du^r.
Vec2 bernstein_derivative(std::span<const Vec2> pts, double u, int r) {
    const int k = static_cast<int>(pts.size()) - 1;
    if (r > k) {
        return {};
    }
    std::array<Vec2, BezierSegment::kMaxPoints> d{};
    std::copy(pts.begin(), pts.end(), d.begin());
    double scale = 1.0;
    for (int level = 0; level < r; ++level) {
        const int m = k - level;
        for (int i = 0; i < m; ++i) {
            d[static_cast<std::size_t>(i)] = d[static_cast<std::size_t>(i + 1)] - d[static_cast<std::size_t>(i)];
        }
        scale *= m;
    }
    const int deg = k - r;
    const double v = 1.0 - u;
    std::array<double, BezierSegment::kMaxPoints> vp{};
    vp[0] = 1.0;
    for (int i = 1; i <= deg; ++i) {
        vp[static_cast<std::size_t>(i)] = vp[static_cast<std::size_t>(i - 1)] * v;
    }
    Vec2 acc{};
    double up = 1.0;
    for (int i = 0; i <= deg; ++i) {
        const double b = binomial(deg, i) * up * vp[static_cast<std::size_t>(deg - i)];
        acc += d[static_cast<std::size_t>(i)] * b;
        up *= u;
    }
    return acc * scale;
}

}  // namespace

double bernstein_basis(int i, int k, double u) {
    if (k < 0 || i < 0 || i > k) {
        throw std::domain_error("bernstein_basis: index out of range");
    }
    if (!(u >= 0.0 && u <= 1.0)) {
        throw std::domain_error("bernstein_basis: u outside [0, 1]");
    }
    return binomial(k, i) * std::pow(1.0 - u, k - i) * std::pow(u, i);
}

BezierSegment::BezierSegment(std::span<const Vec2> control_points, double duration) : duration_(duration) {
    if (control_points.empty() || control_points.size() > kMaxPoints) {
        throw std::invalid_argument("BezierSegment: supports 1 to 4 control points");
    }
    if (!(duration > 0.0)) {
        throw std::invalid_argument("BezierSegment: duration must be positive");
    }
    std::copy(control_points.begin(), control_points.end(), points_.begin());
    count_ = control_points.size();
}

Vec2 BezierSegment::eval(double u) const {
    if (!(u >= 0.0 && u <= 1.0)) {
        throw std::domain_error("bezier_eval: u outside [0, 1]");
    }
    return bernstein_derivative(control_points(), u, 0);
}

BezierSegment BezierSegment::derivative() const {
    if (degree() < 1) {
        throw std::domain_error("bezier_derivative: degree-0 segment has no hodograph");
    }
    std::array<Vec2, kMaxPoints> d{};
    const int k = degree();
    for (int i = 0; i < k; ++i) {
        d[static_cast<std::size_t>(i)] =
            (points_[static_cast<std::size_t>(i + 1)] - points_[static_cast<std::size_t>(i)]) * k;
    }
    return {std::span<const Vec2>(d.data(), static_cast<std::size_t>(k)), duration_};
}

CompositeBezier::CompositeBezier(std::vector<BezierSegment> segments, double t0)
    : segments_(std::move(segments)), t0_(t0) {
    if (segments_.empty()) {
        throw std::invalid_argument("CompositeBezier: need at least one segment");
    }
    const double dur = segments_.front().duration();
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        const auto& s = segments_[i];
        if (s.degree() != kCubic) {
            throw std::invalid_argument("CompositeBezier: segments must be cubic");
        }
        if (std::abs(s.duration() - dur) > 1e-12 * dur) {
            throw std::invalid_argument("CompositeBezier: segment durations must be uniform");
        }
        if (i + 1 < segments_.size()) {
            const auto& n = segments_[i + 1];
            const double scale = 1.0 + norm(s[3]);
            if (distance(s[3], n[0]) > kJointTolerance * scale) {
                throw std::invalid_argument("CompositeBezier: C0 joint violated");
            }
            const Vec2 left = s[3] - s[2];
            const Vec2 right = n[1] - n[0];
            if (distance(left, right) > kJointTolerance * scale) {
                throw std::invalid_argument("CompositeBezier: C1 joint violated");
            }
        }
    }
}

Vec2 CompositeBezier::eval_segment(std::size_t index, double u, int order) const {
    const auto& seg = segments_.at(index);
    const double dur = seg.duration();
    const Vec2 d = bernstein_derivative(seg.control_points(), u, order);
    switch (order) {
        case 0:
            return d;
        case 1:
            return d / dur;
        case 2:
            return d / (dur * dur);
        default:
            throw std::domain_error("cbc_eval: order must be 0, 1, or 2");
    }
}

Vec2 CompositeBezier::eval(double t, int order) const {
    if (order < 0 || order > 2) {
        throw std::domain_error("cbc_eval: order must be 0, 1, or 2");
    }
    const double local = t - t0_;
    const double span = horizon();
    if (!(local >= -kHorizonSlack * span && local <= span * (1.0 + kHorizonSlack))) {
        throw std::domain_error("cbc_eval: t outside the trajectory horizon");
    }
    const double dur = segment_duration();
    const double clamped = std::clamp(local, 0.0, span);
    auto j = static_cast<std::size_t>(clamped / dur);
    j = std::min(j, segments_.size() - 1);
    const double u = std::clamp((clamped - static_cast<double>(j) * dur) / dur, 0.0, 1.0);
    return eval_segment(j, u, order);
}

}  // namespace dbfma
