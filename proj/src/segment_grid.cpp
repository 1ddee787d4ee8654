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

#include "dbfma/segment_grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dbfma {

SegmentGrid::SegmentGrid(std::vector<Segment> segments, double cell_size)
    : segments_(std::move(segments)), cell_(cell_size) {
    if (!(cell_size > 0.0)) {
        throw std::invalid_argument("SegmentGrid: cell size must be positive");
    }
    if (segments_.empty()) {
        return;
    }
    double min_x = std::numeric_limits<double>::infinity();
    double min_y = min_x;
    double max_x = -min_x;
    double max_y = -min_x;
    for (const auto& s : segments_) {
        min_x = std::min({min_x, s.a.x, s.b.x});
        min_y = std::min({min_y, s.a.y, s.b.y});
        max_x = std::max({max_x, s.a.x, s.b.x});
        max_y = std::max({max_y, s.a.y, s.b.y});
    }
    origin_ = {min_x, min_y};
    nx_ = static_cast<long>(std::floor((max_x - min_x) / cell_)) + 1;
    ny_ = static_cast<long>(std::floor((max_y - min_y) / cell_)) + 1;

    const auto n_cells = static_cast<std::size_t>(nx_ * ny_);
    std::vector<std::uint32_t> counts(n_cells, 0);
    auto for_each_cell = [&](const Segment& s, auto&& fn) {
        const long x0 = cell_x(std::min(s.a.x, s.b.x));
        const long x1 = cell_x(std::max(s.a.x, s.b.x));
        const long y0 = cell_y(std::min(s.a.y, s.b.y));
        const long y1 = cell_y(std::max(s.a.y, s.b.y));
        for (long cy = y0; cy <= y1; ++cy) {
            for (long cx = x0; cx <= x1; ++cx) {
                fn(static_cast<std::size_t>(cy * nx_ + cx));
            }
        }
    };
    for (const auto& s : segments_) {
        for_each_cell(s, [&](std::size_t c) { ++counts[c]; });
    }
    cell_start_.assign(n_cells + 1, 0);
    for (std::size_t c = 0; c < n_cells; ++c) {
        cell_start_[c + 1] = cell_start_[c] + counts[c];
    }
    cell_items_.resize(cell_start_.back());
    std::vector<std::uint32_t> cursor(cell_start_.begin(), cell_start_.end() - 1);
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        for_each_cell(segments_[i], [&](std::size_t c) { cell_items_[cursor[c]++] = static_cast<std::uint32_t>(i); });
    }
}

long SegmentGrid::cell_x(double x) const {
    return std::clamp(static_cast<long>(std::floor((x - origin_.x) / cell_)), 0L, nx_ - 1);
}

long SegmentGrid::cell_y(double y) const {
    return std::clamp(static_cast<long>(std::floor((y - origin_.y) / cell_)), 0L, ny_ - 1);
}

NearestSegment SegmentGrid::nearest(const Vec2& p, double tie_tolerance, const TiePreference& prefer) const {
    NearestSegment best;
    if (segments_.empty()) {
        return best;
    }

    auto consider = [&](std::size_t i) {
        const auto& s = segments_[i];
        const double t = closest_segment_param(p, s.a, s.b);
        const double d2 = squared_norm(p - lerp(s.a, s.b, t));
        const double reach = best.distance + tie_tolerance;
        if (d2 > reach * reach) {
            return;
        }
        const double d = std::sqrt(d2);
        NearestSegment cand{i, t, d};
        if (d < best.distance - tie_tolerance) {
            best = cand;
        } else if (d <= best.distance + tie_tolerance) {
            if (prefer ? prefer(cand, best) : (d < best.distance)) {
                best = cand;
            }
        }
    };

    // Unclamped cell of the query; it may sit outside the grid.
    const long qx = static_cast<long>(std::floor((p.x - origin_.x) / cell_));
    const long qy = static_cast<long>(std::floor((p.y - origin_.y) / cell_));
    const long max_ring = std::max({std::abs(qx), std::abs(qy), std::abs(nx_ - 1 - qx), std::abs(ny_ - 1 - qy)});

    auto visit_cell = [&](long cx, long cy) {
        if (cx < 0 || cy < 0 || cx >= nx_ || cy >= ny_) {
            return;
        }
        const auto c = static_cast<std::size_t>(cy * nx_ + cx);
        for (auto k = cell_start_[c]; k < cell_start_[c + 1]; ++k) {
            consider(cell_items_[k]);
        }
    };

    // Distance from p to the border of its own cell; ring r + 1 is at least
    // r * cell + margin away.
    const double fx = p.x - origin_.x - static_cast<double>(qx) * cell_;
    const double fy = p.y - origin_.y - static_cast<double>(qy) * cell_;
    const double margin = std::min({fx, cell_ - fx, fy, cell_ - fy});

    for (long r = 0; r <= max_ring; ++r) {
        if (r == 0) {
            visit_cell(qx, qy);
        } else {
            for (long cx = qx - r; cx <= qx + r; ++cx) {
                visit_cell(cx, qy - r);
                visit_cell(cx, qy + r);
            }
            for (long cy = qy - r + 1; cy <= qy + r - 1; ++cy) {
                visit_cell(qx - r, cy);
                visit_cell(qx + r, cy);
            }
        }
        if (best.distance + tie_tolerance < static_cast<double>(r) * cell_ + margin) {
            break;
        }
    }
    return best;
}

}  // namespace dbfma
