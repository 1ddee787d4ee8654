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

#include "dbfma/track.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "dbfma/errors.hpp"
#include "dbfma/log.hpp"

namespace dbfma {

namespace {

constexpr double kChordTolerance = 0.05;
constexpr double kAlignmentToleranceDeg = 5.0;
constexpr double kOnBoundary = 1e-12;
constexpr double kProjectionTie = 1e-9;

double signed_area(std::span<const Vec2> loop) {
    double a = 0.0;
    for (std::size_t i = 0; i < loop.size(); ++i) {
        a += cross(loop[i], loop[(i + 1) % loop.size()]);
    }
    return 0.5 * a;
}

int orientation(const Vec2& a, const Vec2& b, const Vec2& c) {
    const double v = cross(b - a, c - a);
    return (v > 0.0) - (v < 0.0);
}

bool on_segment(const Vec2& a, const Vec2& b, const Vec2& p) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
           p.y <= std::max(a.y, b.y);
}

bool segments_intersect(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2) {
    const int o1 = orientation(p1, p2, q1);
    const int o2 = orientation(p1, p2, q2);
    const int o3 = orientation(q1, q2, p1);
    const int o4 = orientation(q1, q2, p2);
    if (o1 != o2 && o3 != o4) {
        return true;
    }
    return (o1 == 0 && on_segment(p1, p2, q1)) || (o2 == 0 && on_segment(p1, p2, q2)) ||
           (o3 == 0 && on_segment(q1, q2, p1)) || (o4 == 0 && on_segment(q1, q2, p2));
}

std::vector<Segment> loop_segments(std::span<const Vec2> loop) {
    std::vector<Segment> segs;
    segs.reserve(loop.size());
    for (std::size_t i = 0; i < loop.size(); ++i) {
        segs.push_back({loop[i], loop[(i + 1) % loop.size()]});
    }
    return segs;
}

}  // namespace

// ---------------------------------------------------------------------------
// RacingLine

RacingLine::RacingLine(std::vector<OrlSample> samples, double total_length, bool closed)
    : samples_(std::move(samples)), length_(total_length), closed_(closed) {
    if (samples_.size() < 2) {
        throw ConfigError("racing line needs at least two samples");
    }
    if (samples_.front().s < 0.0) {
        throw ConfigError("racing line arc length must start at s >= 0");
    }
    for (std::size_t i = 1; i < samples_.size(); ++i) {
        if (!(samples_[i].s > samples_[i - 1].s)) {
            std::ostringstream os;
            os << "racing line arc length not strictly increasing at sample " << i;
            throw ConfigError(os.str());
        }
    }
    if (closed_) {
        if (!(length_ > samples_.back().s)) {
            throw ConfigError("closed racing line: total length must exceed the last sample's s");
        }
    } else {
        if (length_ < samples_.back().s) {
            throw ConfigError("open racing line: total length shorter than the last sample's s");
        }
        length_ = samples_.back().s;
    }

    for (std::size_t i = 0; i < chord_count(); ++i) {
        const auto& a = samples_[i];
        const auto& b = samples_[(i + 1) % samples_.size()];
        const double ds = chord_end(i) - chord_start(i);
        const double chord = distance(a.position, b.position);
        if (std::abs(chord - ds) > kChordTolerance * ds) {
            std::ostringstream os;
            os << "racing line chord " << i << " length " << chord << " m disagrees with ds " << ds << " m";
            throw ConfigError(os.str());
        }
        max_spacing_ = std::max(max_spacing_, ds);
    }

    const double cos_tol = std::cos(kAlignmentToleranceDeg * std::numbers::pi / 180.0);
    const std::size_t n = samples_.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double speed = norm(samples_[i].velocity);
        if (speed <= 0.0) {
            continue;
        }
        Vec2 prev = samples_[i].position;
        Vec2 next = samples_[i].position;
        if (closed_ || i > 0) {
            prev = samples_[(i + n - 1) % n].position;
        }
        if (closed_ || i + 1 < n) {
            next = samples_[(i + 1) % n].position;
        }
        const Vec2 tangent = normalized(next - prev);
        if (dot(tangent, samples_[i].velocity / speed) < cos_tol) {
            std::ostringstream os;
            os << "racing line velocity at sample " << i << " is misaligned with the local tangent";
            throw ConfigError(os.str());
        }
    }

    if (max_spacing_ > kMaxRecommendedSpacing) {
        log::warn("racing line spacing ", max_spacing_, " m exceeds the recommended ", kMaxRecommendedSpacing, " m");
    }

    std::vector<Segment> segs;
    segs.reserve(chord_count());
    for (std::size_t i = 0; i < chord_count(); ++i) {
        segs.push_back({samples_[i].position, samples_[(i + 1) % n].position});
    }
    grid_ = SegmentGrid(std::move(segs), kGridCellSize);
}

std::size_t RacingLine::chord_count() const { return closed_ ? samples_.size() : samples_.size() - 1; }

double RacingLine::chord_end(std::size_t i) const { return i + 1 < samples_.size() ? samples_[i + 1].s : length_; }

double RacingLine::wrap(double s) const {
    if (!closed_) {
        return std::clamp(s, 0.0, length_);
    }
    double w = std::fmod(s, length_);
    if (w < 0.0) {
        w += length_;
    }
    return w >= length_ ? 0.0 : w;
}

double RacingLine::offset(double from, double to) const {
    const double d = to - from;
    if (!closed_) {
        return d;
    }
    double w = std::fmod(d + 0.5 * length_, length_);
    if (w < 0.0) {
        w += length_;
    }
    return w - 0.5 * length_;
}

OrlState RacingLine::state_at(double s) const {
    if (samples_.empty()) {
        throw ConfigError("racing line is empty");
    }
    s = wrap(s);
    if (s < samples_.front().s) {
        // Only reachable on closed lines whose first sample is not at s = 0:
        // the point lies on the closing chord.
        s += length_;
    }
    auto it = std::upper_bound(samples_.begin(), samples_.end(), s,
                               [](double v, const OrlSample& smp) { return v < smp.s; });
    std::size_t i = static_cast<std::size_t>(std::distance(samples_.begin(), it));
    i = i == 0 ? 0 : i - 1;
    if (!closed_ && i + 1 >= samples_.size()) {
        return {samples_.back().position, samples_.back().velocity};
    }
    const auto& a = samples_[i];
    if (s == a.s) {
        return {a.position, a.velocity};
    }
    const auto& b = samples_[(i + 1) % samples_.size()];
    const double tau = (s - a.s) / (chord_end(i) - a.s);

    const Vec2 position = lerp(a.position, b.position, tau);
    const double speed_a = norm(a.velocity);
    const double speed_b = norm(b.velocity);
    const double speed = speed_a + (speed_b - speed_a) * tau;
    Vec2 dir = normalized(lerp(normalized(a.velocity), normalized(b.velocity), tau));
    if (squared_norm(dir) == 0.0) {
        dir = normalized(b.position - a.position);
    }
    return {position, dir * speed};
}

double RacingLine::project(const Vec2& x) const {
    if (samples_.empty()) {
        throw ConfigError("racing line is empty");
    }
    auto s_of = [this](const NearestSegment& n) {
        if (n.param >= 1.0) {
            return wrap(chord_end(n.index));
        }
        return wrap(chord_start(n.index) + n.param * (chord_end(n.index) - chord_start(n.index)));
    };
    const auto best = grid_.nearest(x, kProjectionTie, [&](const NearestSegment& cand, const NearestSegment& inc) {
        return s_of(cand) < s_of(inc);
    });
    return s_of(best);
}

// ---------------------------------------------------------------------------
// TrackModel

TrackModel::Boundary::Boundary(std::vector<Vec2> loop) : vertices(std::move(loop)) {
    if (vertices.size() < 3) {
        throw ConfigError("boundary loop needs at least three vertices");
    }
    if (signed_area(vertices) < 0.0) {
        std::reverse(vertices.begin(), vertices.end());
    }
    grid = SegmentGrid(loop_segments(vertices), kGridCellSize);
}

std::pair<double, bool> TrackModel::Boundary::query(const Vec2& x) const {
    const auto hit = grid.nearest(x);
    if (hit.distance <= kOnBoundary) {
        return {0.0, true};
    }
    const std::size_t n = vertices.size();
    const Vec2& a = vertices[hit.index];
    const Vec2& b = vertices[(hit.index + 1) % n];
    if (hit.param > 0.0 && hit.param < 1.0) {
        return {hit.distance, cross(b - a, x - a) > 0.0};
    }
    // Nearest feature is a vertex: the sign follows the sum of the adjacent
    // outward edge normals (counter-clockwise loop, outward = right-hand side).
    const std::size_t v = hit.param <= 0.0 ? hit.index : (hit.index + 1) % n;
    const Vec2& pv = vertices[v];
    const Vec2 e_in = normalized(pv - vertices[(v + n - 1) % n]);
    const Vec2 e_out = normalized(vertices[(v + 1) % n] - pv);
    const Vec2 outward = Vec2{e_in.y, -e_in.x} + Vec2{e_out.y, -e_out.x};
    return {hit.distance, dot(x - pv, outward) <= 0.0};
}

TrackModel::TrackModel(std::string name, std::vector<Vec2> inner, std::vector<Vec2> outer, RacingLine racing_line)
    : name_(std::move(name)), inner_(std::move(inner)), outer_(std::move(outer)), orl_(std::move(racing_line)) {
    if (orl_.empty()) {
        throw ConfigError("track '" + name_ + "' has an empty racing line");
    }
    if (inner_.size() < 2 || outer_.size() < 2) {
        throw ConfigError("track '" + name_ + "' boundaries need at least two points");
    }
    auto warn_spacing = [this](std::span<const Vec2> pts, const char* which) {
        double worst = 0.0;
        for (std::size_t i = 1; i < pts.size(); ++i) {
            worst = std::max(worst, distance(pts[i - 1], pts[i]));
        }
        if (worst > kMaxRecommendedSpacing) {
            log::warn("track '", name_, "' ", which, " boundary spacing ", worst, " m exceeds ",
                      kMaxRecommendedSpacing, " m");
        }
    };
    warn_spacing(inner_, "inner");
    warn_spacing(outer_, "outer");

    if (orl_.closed()) {
        if (!is_simple_loop(inner_) || !is_simple_loop(outer_)) {
            throw ConfigError("track '" + name_ + "' boundary loop self-intersects");
        }
        outer_poly_ = Boundary(outer_);
        inner_poly_ = Boundary(inner_);
        has_hole_ = true;
    } else {
        std::vector<Vec2> loop(inner_.begin(), inner_.end());
        loop.insert(loop.end(), outer_.rbegin(), outer_.rend());
        if (!is_simple_loop(loop)) {
            throw ConfigError("track '" + name_ + "' boundary polygon self-intersects");
        }
        outer_poly_ = Boundary(std::move(loop));
    }

    for (const auto& smp : orl_.samples()) {
        if (distance_to_drivable(smp.position) > 0.0) {
            std::ostringstream os;
            os << "track '" << name_ << "': racing line sample at s=" << smp.s << " leaves the drivable region";
            throw ConfigError(os.str());
        }
    }
}

double TrackModel::distance_to_drivable(const Vec2& x) const {
    const auto [d_out, in_out] = outer_poly_.query(x);
    if (!has_hole_) {
        return in_out ? 0.0 : d_out;
    }
    const auto [d_in, in_in] = inner_poly_.query(x);
    const bool in_hole = in_in && d_in > kOnBoundary;
    if (in_out && !in_hole) {
        return 0.0;
    }
    return std::min(d_out, d_in);
}

bool is_simple_loop(std::span<const Vec2> loop) {
    const std::size_t n = loop.size();
    if (n < 3) {
        return false;
    }
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& a1 = loop[i];
        const Vec2& a2 = loop[(i + 1) % n];
        const double ax0 = std::min(a1.x, a2.x);
        const double ax1 = std::max(a1.x, a2.x);
        const double ay0 = std::min(a1.y, a2.y);
        const double ay1 = std::max(a1.y, a2.y);
        for (std::size_t j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) {
                continue;  // adjacent through the closing edge
            }
            const Vec2& b1 = loop[j];
            const Vec2& b2 = loop[(j + 1) % n];
            if (std::max(b1.x, b2.x) < ax0 || std::min(b1.x, b2.x) > ax1 || std::max(b1.y, b2.y) < ay0 ||
                std::min(b1.y, b2.y) > ay1) {
                continue;
            }
            if (segments_intersect(a1, a2, b1, b2)) {
                return false;
            }
        }
    }
    return true;
}

int winding_number(std::span<const Vec2> loop, const Vec2& p) {
    int wn = 0;
    const std::size_t n = loop.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& a = loop[i];
        const Vec2& b = loop[(i + 1) % n];
        if (a.y <= p.y) {
            if (b.y > p.y && cross(b - a, p - a) > 0.0) {
                ++wn;
            }
        } else if (b.y <= p.y && cross(b - a, p - a) < 0.0) {
            --wn;
        }
    }
    return wn;
}

}  // namespace dbfma
