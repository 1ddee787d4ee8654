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

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "dbfma/vec2.hpp"

namespace dbfma {

struct Segment {
    Vec2 a;
    Vec2 b;
};

struct NearestSegment {
    std::size_t index = 0;
    double param = 0.0;  // closest-point parameter along the segment, in [0, 1]
    double distance = std::numeric_limits<double>::infinity();
};

/// Uniform bucket grid over line segments for nearest-segment queries.
///
/// Each segment is registered in every cell its bounding box touches. A query
/// scans Chebyshev rings of cells outward from the query cell and stops as soon
/// as no unvisited ring can hold anything closer than the current best.
class SegmentGrid {
public:
    /// Returns true when candidate (index, param) should replace the incumbent at
    /// (effectively) equal distance. Used for deterministic tie-breaking.
    using TiePreference = std::function<bool(const NearestSegment& candidate, const NearestSegment& incumbent)>;

    SegmentGrid() = default;
    SegmentGrid(std::vector<Segment> segments, double cell_size);

    [[nodiscard]] NearestSegment nearest(const Vec2& p, double tie_tolerance = 0.0,
                                         const TiePreference& prefer = {}) const;

    [[nodiscard]] std::span<const Segment> segments() const { return segments_; }
    [[nodiscard]] bool empty() const { return segments_.empty(); }

private:
    [[nodiscard]] long cell_x(double x) const;
    [[nodiscard]] long cell_y(double y) const;

    std::vector<Segment> segments_;
    double cell_ = 20.0;
    Vec2 origin_{};
    long nx_ = 0;
    long ny_ = 0;
    std::vector<std::uint32_t> cell_start_;  // CSR layout: nx*ny + 1 offsets
    std::vector<std::uint32_t> cell_items_;
};

}  // namespace dbfma
