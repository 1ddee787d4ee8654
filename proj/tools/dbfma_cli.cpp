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

#include <array>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dbfma/commands.hpp"

namespace {

// "x,y,vx,vy"
bool parse_state(const std::string& text, std::array<double, 4>& out) {
    std::array<double, 4> v{};
    std::size_t pos = 0;
    for (std::size_t i = 0; i < 4; ++i) {
        std::size_t used = 0;
        try {
            v[i] = std::stod(text.substr(pos), &used);
        } catch (const std::exception&) {
            return false;
        }
        pos += used;
        if (i < 3) {
            if (pos >= text.size() || text[pos] != ',') {
                return false;
            }
            ++pos;
        }
    }
    if (pos != text.size()) {
        return false;
    }
    out = v;
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dbfma: sampling-based overtaking planner and two-vehicle race simulator"};
    app.require_subcommand(1);

    std::optional<std::string> config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config, "JSON run configuration");
        sub->add_option("--out", out, "output directory");
    };

    auto* plan = app.add_subcommand("plan", "run one plan call and write the trajectory CSV");
    add_common(plan);
    plan->add_option("--seed", seed, "planner RNG seed");
    std::optional<std::string> track;
    std::string ego_text;
    std::string target_text;
    plan->add_option("--track", track, "track manifest (track.json)");
    plan->add_option("--ego", ego_text, "ego state x,y,vx,vy")->required();
    plan->add_option("--target", target_text, "target state x,y,vx,vy")->required();

    auto* sim = app.add_subcommand("simulate", "run the scenario suite");
    add_common(sim);
    sim->add_option("--seed", seed, "suite seed");
    std::optional<std::size_t> jobs;
    bool traces = false;
    sim->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
    sim->add_flag("--traces", traces, "write a trace CSV per scenario");

    auto* gen = app.add_subcommand("gen-track", "generate a synthetic track file set");
    add_common(gen);
    dbfma::GenTrackArgs gargs;
    std::optional<std::string> name;
    std::optional<double> straight;
    std::optional<double> radius;
    std::optional<double> width;
    std::optional<double> v_cap;
    gen->add_option("--kind", gargs.kind, "oval, chicane or straight")->capture_default_str();
    gen->add_option("--name", name, "track name");
    gen->add_option("--straight", straight, "straight length [m]");
    gen->add_option("--radius", radius, "turn radius [m]");
    gen->add_option("--width", width, "track width [m]");
    gen->add_option("--v-cap", v_cap, "speed cap [m/s]");

    auto* rep = app.add_subcommand("report", "rebuild the report from a results directory");
    std::string results_dir;
    rep->add_option("dir", results_dir, "results directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : dbfma::kExitError;
    }

    const auto cfg_path = config ? std::optional<std::filesystem::path>(*config) : std::nullopt;
    if (*plan) {
        dbfma::PlanArgs args;
        args.config = cfg_path;
        if (track) {
            args.track = *track;
        }
        if (!parse_state(ego_text, args.ego) || !parse_state(target_text, args.target)) {
            std::cerr << "dbfma plan: states must be x,y,vx,vy\n";
            return dbfma::kExitError;
        }
        args.seed = seed;
        args.out = out.value_or(".");
        return dbfma::cmd_plan(args, std::cout, std::cerr);
    }
    if (*sim) {
        dbfma::SimulateArgs args;
        args.config = cfg_path;
        args.seed = seed;
        if (out) {
            args.out = *out;
        }
        args.jobs = jobs;
        args.traces = traces;
        return dbfma::cmd_simulate(args, std::cout, std::cerr);
    }
    if (*gen) {
        gargs.config = cfg_path;
        gargs.name = name;
        gargs.straight_length = straight;
        gargs.radius = radius;
        gargs.width = width;
        gargs.v_cap = v_cap;
        gargs.out = out.value_or(".");
        return dbfma::cmd_gen_track(gargs, std::cout, std::cerr);
    }
    return dbfma::cmd_report(results_dir, std::cout, std::cerr);
}
