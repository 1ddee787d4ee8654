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

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "dbfma/segment_grid.hpp"
#include "dbfma/vec2.hpp"

namespace dbfma {

/// Cell edge of the spatial index used for boundary and racing-line queries.
inline constexpr double kGridCellSize = 10.0;
/// Input resolution above which a warning is logged.
inline constexpr double kMaxRecommendedSpacing = 2.0;

struct OrlSample {
    double s = 0.0;
    Vec2 position;
    Vec2 velocity;
};

struct OrlState {
    Vec2 position;
    Vec2 velocity;
};

/// The optimal racing line: arc-length indexed positions and nominal velocities.
///
/// For a closed line the sample list does not repeat the first sample; the
/// closing chord runs from the last sample back to s = 0 at s = total_length.
class RacingLine {
public:
    RacingLine() = default;
    /// Validates the arc-length and tangent-alignment invariants; throws ConfigError.
    RacingLine(std::vector<OrlSample> samples, double total_length, bool closed);

    [[nodiscard]] std::span<const OrlSample> samples() const { return samples_; }
    [[nodiscard]] double total_length() const { return length_; }
    [[nodiscard]] bool closed() const { return closed_; }
    [[nodiscard]] bool empty() const { return samples_.empty(); }
    [[nodiscard]] double max_spacing() const { return max_spacing_; }

    /// Position and velocity at arc length s (wrapped for closed lines, clamped for open ones).
    [[nodiscard]] OrlState state_at(double s) const;

    /// argmin_s |p(s) - x| with projection onto the nearest chord.
    /// Equidistant candidates resolve to the smaller s.
    [[nodiscard]] double project(const Vec2& x) const;

    /// Normalizes s into [0, L) for closed lines, [0, L] for open ones.
    [[nodiscard]] double wrap(double s) const;

    /// Signed arc-length offset to - from. Closed lines return the representative
    /// in [-L/2, L/2) so comparisons across the start/finish line behave.
    [[nodiscard]] double offset(double from, double to) const;

private:
    [[nodiscard]] std::size_t chord_count() const;
    [[nodiscard]] double chord_start(std::size_t i) const { return samples_[i].s; }
    [[nodiscard]] double chord_end(std::size_t i) const;

    std::vector<OrlSample> samples_;
    double length_ = 0.0;
    bool closed_ = false;
    double max_spacing_ = 0.0;
    SegmentGrid grid_;
};

/// Track boundaries plus racing line.
///
/// For closed tracks `inner` and `outer` are closed loops (first point not
/// repeated) and the drivable set is the annulus between them. For open tracks
/// `inner` is the left boundary and `outer` the right one, both in driving
/// order, and the drivable set is the polygon they enclose.
class TrackModel {
public:
    TrackModel() = default;
    /// Validates simple boundaries and that every racing-line sample is drivable.
    TrackModel(std::string name, std::vector<Vec2> inner, std::vector<Vec2> outer, RacingLine racing_line);

    [[nodiscard]] const std::string& name() const { return name_; }
    [[nodiscard]] const RacingLine& racing_line() const { return orl_; }
    [[nodiscard]] bool closed() const { return orl_.closed(); }
    [[nodiscard]] std::span<const Vec2> inner() const { return inner_; }
    [[nodiscard]] std::span<const Vec2> outer() const { return outer_; }

    /// Omega: zero inside or on the drivable region, else distance to the nearer boundary.
    [[nodiscard]] double distance_to_drivable(const Vec2& x) const;

    [[nodiscard]] double project_onto_orl(const Vec2& x) const { return orl_.project(x); }
    [[nodiscard]] OrlState orl_state(double s) const { return orl_.state_at(s); }

private:
    // A closed polygon, stored counter-clockwise, with its grid.
    struct Boundary {
        std::vector<Vec2> vertices;
        SegmentGrid grid;

        Boundary() = default;
        explicit Boundary(std::vector<Vec2> loop);
        // Unsigned distance, and whether x lies inside or on the polygon.
        [[nodiscard]] std::pair<double, bool> query(const Vec2& x) const;
    };

    std::string name_;
    std::vector<Vec2> inner_;
    std::vector<Vec2> outer_;
    RacingLine orl_;
    // Closed: region = inside(outer) and not strictly inside(inner).
    // Open: region = inside(outer), where `outer` is the stitched left/right polygon.
    Boundary outer_poly_;
    Boundary inner_poly_;
    bool has_hole_ = false;
};

/// True when the closed polyline has no intersecting non-adjacent edges.
bool is_simple_loop(std::span<const Vec2> loop);

/// Winding number of a closed polygon about p (brute force, O(n)).
int winding_number(std::span<const Vec2> loop, const Vec2& p);

}  // namespace dbfma
