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

#include "dbfma/cbc_param.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "dbfma/errors.hpp"

namespace dbfma {

std::vector<double> ThetaVector::flatten() const {
    std::vector<double> flat;
    flat.reserve(scalar_count());
    for (const auto& p : free_points) {
        flat.push_back(p.x);
        flat.push_back(p.y);
    }
    flat.push_back(s_f_ego);
    return flat;
}

ThetaVector ThetaVector::unflatten(std::span<const double> flat) {
    if (flat.size() < 5 || (flat.size() - 1) % 4 != 0) {
        throw std::invalid_argument("ThetaVector: flat length must be 4(N_S - 1) + 1");
    }
    ThetaVector theta;
    for (std::size_t i = 0; i + 1 < flat.size(); i += 2) {
        theta.free_points.push_back({flat[i], flat[i + 1]});
    }
    theta.s_f_ego = flat.back();
    return theta;
}

CompositeBezier assemble_trajectory(std::span<const Vec2> free_points, const BoundaryStates& bounds, double t_f,
                                    std::size_t n_segments) {
    if (n_segments < 2) {
        throw std::invalid_argument("assemble_trajectory: need at least two segments");
    }
    if (free_points.size() != 2 * (n_segments - 1)) {
        throw std::invalid_argument("assemble_trajectory: free point count does not match segment count");
    }
    if (!(t_f > 0.0)) {
        throw std::invalid_argument("assemble_trajectory: horizon must be positive");
    }
    const double dur = t_f / static_cast<double>(n_segments);
    const double handle = dur / kCubic;

    std::vector<BezierSegment> segs;
    segs.reserve(n_segments);
    Vec2 head0 = bounds.start_position;
    Vec2 head1 = bounds.start_position + bounds.start_velocity * handle;
    for (std::size_t i = 0; i + 1 < n_segments; ++i) {
        const Vec2& c2 = free_points[2 * i];
        const Vec2& c3 = free_points[2 * i + 1];
        segs.emplace_back(std::initializer_list<Vec2>{head0, head1, c2, c3}, dur);
        head0 = c3;
        head1 = c3 + (c3 - c2);
    }
    segs.emplace_back(std::initializer_list<Vec2>{head0, head1, bounds.end_position - bounds.end_velocity * handle,
                                                  bounds.end_position},
                      dur);
    return CompositeBezier(std::move(segs), 0.0);
}

CompositeBezier build_trajectory(const ThetaVector& theta, const Vec2& ego_pos, const Vec2& ego_vel,
                                 const RacingLine& orl, double t_f, std::size_t n_segments) {
    const OrlState end = orl.state_at(theta.s_f_ego);
    return assemble_trajectory(theta.free_points, {ego_pos, ego_vel, end.position, end.velocity}, t_f, n_segments);
}

double advance_along_orl(const RacingLine& orl, double s_now, double duration, double speed_scale) {
    if (duration <= 0.0) {
        return s_now;
    }
    constexpr double kStep = 0.02;
    const auto steps = static_cast<std::size_t>(std::ceil(duration / kStep));
    const double h = duration / static_cast<double>(steps);
    auto rate = [&](double s) { return speed_scale * norm(orl.state_at(s).velocity); };
    double s = s_now;
    for (std::size_t i = 0; i < steps; ++i) {
        const double k1 = rate(s);
        const double k2 = rate(s + 0.5 * h * k1);
        const double k3 = rate(s + 0.5 * h * k2);
        const double k4 = rate(s + h * k3);
        s += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return s;
}

double advance_with_speed_lag(const RacingLine& orl, double s_now, double start_speed, double duration,
                              double speed_rate) {
    if (duration <= 0.0) {
        return s_now;
    }
    constexpr double kStep = 0.02;
    const auto steps = static_cast<std::size_t>(std::ceil(duration / kStep));
    const double h = duration / static_cast<double>(steps);
    double s = s_now;
    double v = start_speed;
    for (std::size_t i = 0; i < steps; ++i) {
        const double target = norm(orl.state_at(s).velocity);
        const double v_next = v + std::clamp(target - v, -speed_rate * h, speed_rate * h);
        s += 0.5 * (v + v_next) * h;
        v = v_next;
    }
    return s;
}

ThetaVector lsq_fit_orl(const RacingLine& orl, const Vec2& ego_pos, const Vec2& ego_vel, double s_now, double t_f,
                        std::size_t n_segments, std::size_t samples, double speed_rate) {
    if (n_segments < 2) {
        throw ConfigError("lsq_fit_orl: need at least two segments");
    }
    const std::size_t m = samples == 0 ? kLsqSamplesPerSegment * n_segments : samples;
    const std::size_t n_points = 2 * (n_segments - 1);
    const std::size_t n_unknowns = 2 * n_points;
    if (m < n_unknowns || m < 2) {
        throw ConfigError("lsq_fit_orl: fewer sample times than free parameters");
    }

    // Reference positions along the racing line.
    std::vector<double> times(m);
    std::vector<Vec2> targets(m);
    const bool lagged = std::isfinite(speed_rate);
    double s = s_now;
    double t_prev = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        times[k] = t_f * static_cast<double>(k) / static_cast<double>(m - 1);
        if (lagged) {
            s = advance_with_speed_lag(orl, s_now, norm(ego_vel), times[k], speed_rate);
        } else {
            s = advance_along_orl(orl, s, times[k] - t_prev);
        }
        t_prev = times[k];
        targets[k] = orl.state_at(s).position;
    }
    const double s_final = s;
    const OrlState end = orl.state_at(s_final);
    const BoundaryStates bounds{ego_pos, ego_vel, end.position, end.velocity};

    // The curve is affine in the free coordinates, so probing with unit
    // coordinates recovers the design matrix exactly.
    auto positions = [&](const std::vector<Vec2>& pts) {
        const CompositeBezier c = assemble_trajectory(pts, bounds, t_f, n_segments);
        std::vector<Vec2> out(m);
        for (std::size_t k = 0; k < m; ++k) {
            out[k] = c.position(times[k]);
        }
        return out;
    };
    std::vector<Vec2> probe(n_points, Vec2{});
    const auto base = positions(probe);

    Eigen::MatrixXd a(2 * m, n_unknowns);
    Eigen::VectorXd rhs(2 * m);
    for (std::size_t k = 0; k < m; ++k) {
        rhs(static_cast<Eigen::Index>(2 * k)) = targets[k].x - base[k].x;
        rhs(static_cast<Eigen::Index>(2 * k + 1)) = targets[k].y - base[k].y;
    }
    for (std::size_t j = 0; j < n_unknowns; ++j) {
        std::fill(probe.begin(), probe.end(), Vec2{});
        if (j % 2 == 0) {
            probe[j / 2].x = 1.0;
        } else {
            probe[j / 2].y = 1.0;
        }
        const auto col = positions(probe);
        for (std::size_t k = 0; k < m; ++k) {
            a(static_cast<Eigen::Index>(2 * k), static_cast<Eigen::Index>(j)) = col[k].x - base[k].x;
            a(static_cast<Eigen::Index>(2 * k + 1), static_cast<Eigen::Index>(j)) = col[k].y - base[k].y;
        }
    }
    const Eigen::VectorXd z = a.colPivHouseholderQr().solve(rhs);

    ThetaVector theta;
    theta.free_points.resize(n_points);
    for (std::size_t i = 0; i < n_points; ++i) {
        theta.free_points[i] = {z(static_cast<Eigen::Index>(2 * i)), z(static_cast<Eigen::Index>(2 * i + 1))};
    }
    theta.s_f_ego = orl.wrap(s_final);
    return theta;
}

}  // namespace dbfma
