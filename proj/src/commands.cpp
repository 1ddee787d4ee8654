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

#include "dbfma/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "dbfma/errors.hpp"
#include "dbfma/log.hpp"
#include "dbfma/planner.hpp"
#include "dbfma/race_sim.hpp"
#include "dbfma/track_io.hpp"

namespace dbfma {

namespace {

constexpr double kCsvRate = 100.0;

// Result files echo the config minus execution-only fields, so that the
// same suite run elsewhere or with other parallelism stays byte-identical.
nlohmann::json result_echo(const RunConfig& cfg) {
    nlohmann::json echo = config_to_json(cfg);
    echo.erase("output_dir");
    echo.erase("jobs");
    return echo;
}

}  // namespace

RunConfig resolve_config(const std::optional<std::filesystem::path>& path) {
    if (path) {
        return load_config(*path);
    }
    RunConfig cfg;
    cfg.validate();
    return cfg;
}

std::vector<TrackModel> resolve_tracks(const RunConfig& cfg) {
    std::vector<TrackModel> tracks;
    if (cfg.tracks.empty()) {
        tracks.push_back(generate_track(TrackGenParams::defaults(TrackKind::oval), cfg.setup.schedule));
        tracks.push_back(generate_track(TrackGenParams::defaults(TrackKind::chicane), cfg.setup.schedule));
        return tracks;
    }
    for (const auto& p : cfg.tracks) {
        tracks.push_back(load_track(p));
    }
    for (std::size_t i = 0; i < tracks.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (tracks[i].name() == tracks[j].name()) {
                throw ConfigError("duplicate track name '" + tracks[i].name() + "'");
            }
        }
    }
    return tracks;
}

int cmd_plan(const PlanArgs& args, std::ostream& out, std::ostream& err) {
    try {
        RunConfig cfg = resolve_config(args.config);
        if (args.seed) {
            cfg.setup.planner.rng_seed = *args.seed;
        }
        TrackModel track = args.track ? load_track(*args.track)
                           : cfg.tracks.empty()
                               ? generate_track(TrackGenParams::defaults(TrackKind::oval), cfg.setup.schedule)
                               : load_track(cfg.tracks.front());
        const RacingLine& orl = track.racing_line();
        const PlannerConfig& pcfg = cfg.setup.planner;

        const Vec2 tgt_pos{args.target[0], args.target[1]};
        const Vec2 tgt_vel{args.target[2], args.target[3]};
        const double s_tgt = track.project_onto_orl(tgt_pos);
        const double v_orl = norm(orl.state_at(s_tgt).velocity);
        if (!(v_orl > 0.0)) {
            throw ConfigError("plan: racing-line speed is zero at the target");
        }
        const double scale = norm(tgt_vel) / v_orl;

        PlanRequest req;
        req.ego_pos = {args.ego[0], args.ego[1]};
        req.ego_vel = {args.ego[2], args.ego[3]};
        req.ego_heading = heading_of(req.ego_vel);
        req.prediction = predict_along_orl(orl, scale, s_tgt, pcfg.t_f, cfg.sim);
        req.s_f_target = track.project_onto_orl(req.prediction.samples().back().position);

        const PlanResult r = plan(req, track, cfg.setup.schedule, cfg.setup.dims, pcfg, cfg.setup.likelihood);
        const LikelihoodBreakdown& b = r.breakdown;
        out << (r.feasible() ? "trajectory" : "infeasible") << " iterations=" << r.iterations_used
            << " time_ms=" << r.timing_ms << "\n";
        out << "p_ca=" << b.p_ca << " p_tk=" << b.p_tk << " p_df=" << b.p_df << " product=" << b.product
            << " s_f_ego=" << r.theta.s_f_ego << "\n";
        if (!r.feasible()) {
            return kExitInfeasible;
        }

        const CompositeBezier& traj = *r.trajectory;
        const auto n = static_cast<std::size_t>(std::lround(traj.horizon() * kCsvRate));
        std::ostringstream csv;
        csv.precision(17);
        csv << "t,x,y,vx,vy,ax,ay\n";
        for (std::size_t k = 0; k <= n; ++k) {
            const double t = k == n ? traj.t_end() : traj.t0() + static_cast<double>(k) / kCsvRate;
            const Vec2 p = traj.position(t);
            const Vec2 v = traj.velocity(t);
            const Vec2 a = traj.acceleration(t);
            csv << t << ',' << p.x << ',' << p.y << ',' << v.x << ',' << v.y << ',' << a.x << ',' << a.y << '\n';
        }
        std::filesystem::create_directories(args.out);
        write_file_atomic(args.out / "trajectory.csv", csv.str());
        out << "wrote " << (args.out / "trajectory.csv").string() << " (" << n + 1 << " samples)\n";
        return kExitOk;
    } catch (const std::exception& e) {
        err << "dbfma plan: " << e.what() << "\n";
        return kExitError;
    }
}

SimulationRun run_simulation(const RunConfig& cfg, bool traces, std::ostream* progress) {
    const std::vector<TrackModel> tracks = resolve_tracks(cfg);
    std::map<std::string, const TrackModel*> by_name;
    for (const TrackModel& t : tracks) {
        by_name[t.name()] = &t;
    }
    const std::vector<Scenario> suite = generate_suite(tracks, cfg.suite);
    const nlohmann::json echo = result_echo(cfg);
    const std::filesystem::path& dir = cfg.output_dir;
    std::filesystem::create_directories(dir);
    write_file_atomic(dir / "config.json", config_to_json(cfg).dump(2) + "\n");

    SimulationRun run;
    run.records.resize(suite.size());
    std::vector<bool> done(suite.size(), false);
    for (std::size_t i = 0; i < suite.size(); ++i) {
        const auto path = dir / result_filename(cfg.suite.seed, suite[i].index);
        if (!std::filesystem::exists(path)) {
            continue;
        }
        try {
            run.records[i] = read_record(path);
            done[i] = true;
            ++run.resumed;
        } catch (const std::exception& e) {
            log::warn("rerunning scenario ", suite[i].index, ": ", e.what());
        }
    }

    SimConfig sim = cfg.sim;
    sim.record_trace = traces;
    std::atomic<std::size_t> next{0};
    std::mutex out_mu;
    auto worker = [&]() {
        for (std::size_t i = next++; i < suite.size(); i = next++) {
            if (done[i]) {
                continue;
            }
            const Scenario& sc = suite[i];
            ResultRecord rec;
            std::vector<TraceRow> trace;
            try {
                ScenarioResult r = run_scenario(sc, *by_name.at(sc.track_id), cfg.setup, sim);
                trace = std::move(r.trace);
                rec = ResultRecord::from(sc, r);
            } catch (const std::exception& e) {
                log::error("scenario ", sc.index, " failed: ", e.what());
                rec = ResultRecord::failed(sc, e.what());
            }
            if (traces && rec.error.empty()) {
                std::filesystem::path tp = dir / result_filename(cfg.suite.seed, sc.index);
                tp.replace_extension(".trace.csv");
                write_trace_csv(tp, trace);
            }
            write_record(dir, cfg.suite.seed, rec, echo);
            if (progress != nullptr) {
                const std::lock_guard lock(out_mu);
                *progress << "scenario " << sc.index << " " << sc.track_id << " scale " << sc.target_speed_scale
                          << (rec.success ? " success" : rec.collided ? " collision" : " no-pass") << "\n";
            }
            run.records[i] = std::move(rec);
        }
    };
    const std::size_t n_workers = std::max<std::size_t>(1, std::min(cfg.jobs, suite.size()));
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < n_workers; ++w) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto& t : pool) {
        t.join();
    }
    run.report = build_report(run.records);
    write_file_atomic(dir / "report.csv", report_csv(run.report));
    return run;
}

int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err) {
    try {
        RunConfig cfg = resolve_config(args.config);
        if (args.seed) {
            cfg.suite.seed = *args.seed;
        }
        if (args.out) {
            cfg.output_dir = *args.out;
        }
        if (args.jobs) {
            cfg.jobs = *args.jobs;
        }
        cfg.validate();
        const SimulationRun run = run_simulation(cfg, args.traces, log::threshold() <= log::Level::info ? &err : nullptr);
        if (run.resumed > 0) {
            out << "resumed " << run.resumed << " completed scenarios\n";
        }
        print_report(out, run.report);
        return kExitOk;
    } catch (const std::exception& e) {
        err << "dbfma simulate: " << e.what() << "\n";
        return kExitError;
    }
}

int cmd_gen_track(const GenTrackArgs& args, std::ostream& out, std::ostream& err) {
    try {
        const RunConfig cfg = resolve_config(args.config);
        TrackGenParams p = TrackGenParams::defaults(parse_track_kind(args.kind));
        if (args.name) {
            p.name = *args.name;
        }
        if (args.straight_length) {
            p.straight_length = *args.straight_length;
        }
        if (args.radius) {
            p.radius = *args.radius;
        }
        if (args.width) {
            p.width = *args.width;
        }
        if (args.v_cap) {
            p.v_cap = *args.v_cap;
        }
        const TrackModel track = generate_track(p, cfg.setup.schedule);
        const auto manifest = save_track(track, args.out);
        out << "wrote " << manifest.string() << " (" << track.racing_line().total_length() << " m)\n";
        return kExitOk;
    } catch (const std::exception& e) {
        err << "dbfma gen-track: " << e.what() << "\n";
        return kExitError;
    }
}

int cmd_report(const std::filesystem::path& dir, std::ostream& out, std::ostream& err) {
    if (!std::filesystem::is_directory(dir)) {
        err << "dbfma report: " << dir.string() << " is not a directory\n";
        return kExitError;
    }
    const LoadedResults loaded = load_results(dir);
    for (const auto& [path, why] : loaded.corrupt) {
        err << "dbfma report: excluded " << path.string() << ": " << why << "\n";
    }
    if (loaded.records.empty()) {
        err << "dbfma report: no result files in " << dir.string() << "\n";
        return kExitError;
    }
    const SuiteReport rep = build_report(loaded.records);
    print_report(out, rep);
    try {
        write_file_atomic(dir / "report.csv", report_csv(rep));
    } catch (const std::exception& e) {
        err << "dbfma report: " << e.what() << "\n";
        return kExitError;
    }
    return loaded.corrupt.empty() ? kExitOk : kExitError;
}

}  // namespace dbfma
