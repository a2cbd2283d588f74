#pragma once

// Command-line front end. Exit codes: 0 success, 1 usage error,
// 2 infeasible, 3 I/O or parse error.

#include "reefer/config.hpp"
#include "reefer/cycle.hpp"
#include "reefer/ems.hpp"
#include "reefer/error.hpp"
#include "reefer/harness.hpp"
#include "reefer/parallel.hpp"
#include "reefer/report.hpp"
#include "reefer/simulate.hpp"
#include "reefer/svg.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace reefer::cli {

enum ExitCode : int { ok = 0, usage = 1, infeasible = 2, io = 3 };

inline Config load_config(const std::string& path) {
    return path.empty() ? Config{} : parse_config(read_file(path));
}

inline std::string stem_of(const std::string& path) { return std::filesystem::path(path).stem().string(); }

/// Cycle file expanded to the configured working day.
inline DriveCycle load_mission(const std::string& path, const Config& cfg) {
    return make_mission(load_cycle(read_file(path), stem_of(path)), cfg.sim);
}

inline Json run_report(const std::string& cycle, const std::string& strategy, const StrategyResult& r) {
    Json j;
    j["cycle"] = cycle;
    j["strategy"] = strategy;
    const Json fields = to_json(r);
    for (const auto& [k, v] : fields.items()) j[k] = v;
    return j;
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Refrigerated trailer energy management: cycles, simulation, optimization, sweeps"};
    app.failure_message(CLI::FailureMessage::help);
    app.require_subcommand(0, 1);
    app.fallthrough();

    bool dump_config = false;
    unsigned jobs = default_jobs();
    app.add_flag("--dump-config", dump_config, "Print the default configuration JSON and exit");
    app.add_option("--jobs", jobs, "Worker threads (results do not depend on it)")->check(CLI::Range(1u, 1024u));

    // gencycle
    auto* gen = app.add_subcommand("gencycle", "Write a synthetic drive cycle CSV");
    std::string profile, gen_out;
    double duration = 0;
    std::uint64_t seed = 1;
    int repeats = 1;
    double break_min = 45;
    gen->add_option("--profile", profile, "urban | regional | longhaul")
        ->required()
        ->check(CLI::IsMember({"urban", "regional", "longhaul"}));
    gen->add_option("--duration", duration, "Length of one cycle in seconds (default per profile)");
    gen->add_option("--seed", seed, "Random seed")->capture_default_str();
    gen->add_option("--repeats", repeats, "Cycle repetitions joined by breaks")->capture_default_str();
    gen->add_option("--break-min", break_min, "Break between repetitions in minutes")->capture_default_str();
    gen->add_option("--out", gen_out, "Output CSV")->required();

    // simulate
    auto* sim = app.add_subcommand("simulate", "Simulate one strategy on a mission");
    std::string sim_cycle, sim_config, strategy = "constant", sim_schedule, sim_trace, sim_report;
    std::optional<double> lower, upper;
    sim->add_option("--cycle", sim_cycle, "Drive cycle CSV")->required();
    sim->add_option("--config", sim_config, "Config JSON");
    sim->add_option("--strategy", strategy, "constant | bangbang | schedule")
        ->check(CLI::IsMember({"constant", "bangbang", "schedule"}))
        ->capture_default_str();
    sim->add_option("--lower", lower, "Bang-bang lower SoC (fraction)");
    sim->add_option("--upper", upper, "Bang-bang upper SoC (fraction)");
    sim->add_option("--schedule", sim_schedule, "Schedule CSV (step,active)");
    sim->add_option("--trace", sim_trace, "Per-step trace CSV");
    sim->add_option("--report", sim_report, "Result JSON (stdout if omitted)");

    // sweep
    auto* sw = app.add_subcommand("sweep", "Bang-bang threshold sweep");
    std::string sw_cycle, sw_config, sw_report, sw_plot, sw_format = "json";
    sw->add_option("--cycle", sw_cycle, "Drive cycle CSV")->required();
    sw->add_option("--config", sw_config, "Config JSON");
    sw->add_option("--report", sw_report, "Sweep report (stdout if omitted)");
    sw->add_option("--format", sw_format, "json | csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    sw->add_option("--plot", sw_plot, "Heatmap SVG");

    // optimize
    auto* opt = app.add_subcommand("optimize", "Minimum-fuel towing schedule");
    std::string opt_cycle, opt_config, oracle, opt_schedule, opt_report;
    opt->add_option("--cycle", opt_cycle, "Drive cycle CSV")->required();
    opt->add_option("--config", opt_config, "Config JSON");
    opt->add_option("--oracle", oracle, "Use dp or exhaustive instead of the efficiency ranking")
        ->check(CLI::IsMember({"dp", "exhaustive"}));
    opt->add_option("--schedule", opt_schedule, "Schedule CSV output");
    opt->add_option("--report", opt_report, "Result JSON (stdout if omitted)");

    // compare
    auto* cmp = app.add_subcommand("compare", "Four-strategy comparison over several missions");
    std::vector<std::string> cmp_cycles;
    std::string cmp_config, out_dir;
    cmp->add_option("--cycles", cmp_cycles, "Drive cycle CSVs")->required()->delimiter(',');
    cmp->add_option("--config", cmp_config, "Config JSON");
    cmp->add_option("--out-dir", out_dir, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : usage;
    }

    try {
        if (dump_config) {
            out << default_config_json();
            return ok;
        }

        if (*gen) {
            const Profile p = parse_profile(profile);
            if (duration <= 0) duration = default_cycle_duration(p);
            if (repeats < 1) throw InvalidArgument("--repeats must be at least 1");
            if (break_min < 0) throw InvalidArgument("--break-min must be non-negative");
            DriveCycle c = synthesize_cycle(p, duration, seed);
            c = compose_mission(c, repeats, break_min * 60.0);
            write_file(gen_out, cycle_to_csv(c));
            return ok;
        }

        if (*sim) {
            const Config cfg = load_config(sim_config);
            const DriveCycle mission = load_mission(sim_cycle, cfg);
            const MissionModel m(mission, cfg.vehicle, cfg.trailer);
            Control control = ReactivePolicy::constant();
            if (strategy == "bangbang") {
                if (!lower || !upper) throw InvalidArgument("bangbang needs --lower and --upper");
                control = ReactivePolicy::bangbang(*lower, *upper);
            } else if (strategy == "schedule") {
                if (sim_schedule.empty()) throw InvalidArgument("schedule strategy needs --schedule");
                control = load_schedule(read_file(sim_schedule));
            }
            const auto s = simulate(m, control);
            Json j = run_report(mission.name, strategy, s.result);
            if (strategy == "bangbang") j["thresholds"] = to_json(ThresholdPair{*lower, *upper});
            if (!sim_trace.empty()) write_file(sim_trace, trace_to_csv(s.trace));
            const std::string text = j.dump(2) + '\n';
            if (sim_report.empty()) out << text;
            else write_file(sim_report, text);
            return ok;
        }

        if (*sw) {
            const Config cfg = load_config(sw_config);
            const DriveCycle mission = load_mission(sw_cycle, cfg);
            const MissionModel m(mission, cfg.vehicle, cfg.trailer);
            const auto rep = threshold_sweep(m, mission.name, cfg.sweep, jobs);
            const std::string text = export_report(rep, parse_report_format(sw_format));
            if (sw_report.empty()) out << text;
            else write_file(sw_report, text);
            if (!sw_plot.empty()) write_file(sw_plot, render_sweep_heatmap(rep));
            return ok;
        }

        if (*opt) {
            const Config cfg = load_config(opt_config);
            const DriveCycle mission = load_mission(opt_cycle, cfg);
            const MissionModel m(mission, cfg.vehicle, cfg.trailer);
            TowingSchedule schedule;
            std::string name = "global_optimum";
            if (oracle == "dp") {
                schedule = dp_optimize(m, cfg.dp.soc_grid_step);
                name = "dp";
            } else if (oracle == "exhaustive") {
                schedule = exhaustive_optimize(m);
                name = "exhaustive";
            } else {
                schedule = greedy_optimize(m).schedule;
            }
            const auto r = simulate(m, schedule, false).result;
            if (!opt_schedule.empty()) write_file(opt_schedule, schedule_to_csv(schedule));
            const std::string text = run_report(mission.name, name, r).dump(2) + '\n';
            if (opt_report.empty()) out << text;
            else write_file(opt_report, text);
            return ok;
        }

        if (*cmp) {
            const Config cfg = load_config(cmp_config);
            std::vector<NamedMission> missions;
            for (const auto& path : cmp_cycles) missions.push_back({stem_of(path), load_mission(path, cfg)});
            const auto run = compare_strategies(missions, cfg.vehicle, cfg.trailer, cfg.sweep, jobs);
            std::error_code ec;
            std::filesystem::create_directories(out_dir, ec);
            if (ec) throw IoError("cannot create '" + out_dir + "': " + ec.message());
            const std::filesystem::path dir(out_dir);
            write_file((dir / "comparison.json").string(), export_report(run.reports, ReportFormat::json));
            for (std::size_t i = 0; i < missions.size(); ++i) {
                std::vector<LabeledTrace> traces;
                for (const auto& name : strategy_names()) traces.push_back({name, &run.traces[i].at(name)});
                write_file((dir / ("soc_" + missions[i].name + ".svg")).string(),
                           render_soc_plot(traces, cfg.trailer.batt.soc_floor));
                write_file((dir / ("sweep_" + missions[i].name + ".svg")).string(),
                           render_sweep_heatmap(run.sweeps[i]));
            }
            return ok;
        }

        err << app.help();
        return usage;
    } catch (const InfeasibleError& e) {
        err << "infeasible: " << e.what() << '\n';
        return infeasible;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return io;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << '\n';
        return io;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return usage;
    }
}

} // namespace reefer::cli
