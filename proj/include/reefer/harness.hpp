#pragma once

// Experiment orchestration: bang-bang threshold sweeps and the four-strategy
// comparison (constant towing, fleet-wide bang-bang, per-mission bang-bang,
// efficiency-ranked optimum).

#include "reefer/cycle.hpp"
#include "reefer/ems.hpp"
#include "reefer/error.hpp"
#include "reefer/parallel.hpp"
#include "reefer/simulate.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace reefer {

struct SimSettings {
    double dt_s = 1.0;
    int repeats = 3;
    double break_s = 2700.0;  // 45 min loading/unloading stop
};

struct SweepSettings {
    double grid_step = 0.05;
    double lower_min = 0.20;
    double lower_max = 0.95;
    double upper_min = 0.25;
    double upper_max = 1.00;
};

/// Length of one synthetic cycle before repetition.
inline double default_cycle_duration(Profile p) {
    switch (p) {
    case Profile::urban: return 3600.0;
    case Profile::regional: return 3600.0;
    case Profile::longhaul: return 5400.0;
    }
    return 3600.0;
}

/// A working day: the cycle resampled to dt and repeated with breaks.
inline DriveCycle make_mission(const DriveCycle& cycle, const SimSettings& sim) {
    const DriveCycle uniform = cycle.uniform() && cycle.dt_s == sim.dt_s ? cycle : resample(cycle, sim.dt_s);
    return compose_mission(uniform, sim.repeats, sim.break_s);
}

inline DriveCycle default_mission(Profile p, std::uint64_t seed, const SimSettings& sim = {}) {
    return make_mission(synthesize_cycle(p, default_cycle_duration(p), seed), sim);
}

struct ThresholdPair {
    double lower = 0.0;
    double upper = 0.0;
    bool operator==(const ThresholdPair&) const = default;
};

struct SweepCell {
    double lower = 0.0;
    double upper = 0.0;
    double extra_fuel_L = 0.0;
    bool feasible = false;
    bool operator==(const SweepCell&) const = default;
};

struct SweepReport {
    std::string cycle_name;
    std::vector<SweepCell> grid;  // sorted by (lower, upper)
    std::optional<ThresholdPair> best;
    bool operator==(const SweepReport&) const = default;
};

namespace detail {

inline double snap(double x) { return std::round(x * 1e9) / 1e9; }

inline std::vector<double> grid_values(double lo, double hi, double step) {
    if (!(step > 0)) throw InvalidArgument("sweep: grid step must be positive");
    const double count = (hi - lo) / step;
    if (count < -1e-9 || std::abs(count - std::round(count)) > 1e-6)
        throw InvalidArgument("sweep: grid step must divide the threshold ranges");
    std::vector<double> out;
    for (long i = 0; i <= std::lround(count); ++i) out.push_back(snap(lo + static_cast<double>(i) * step));
    return out;
}

/// Higher lower bound wins, then lower upper bound.
inline bool preferred_on_tie(const ThresholdPair& a, const ThresholdPair& b) {
    if (a.lower != b.lower) return a.lower > b.lower;
    return a.upper < b.upper;
}

} // namespace detail

/// All (lower, upper) pairs with lower < upper on the configured grid.
inline std::vector<ThresholdPair> threshold_grid(const SweepSettings& s, const BatteryParams& b) {
    if (s.lower_min < b.soc_floor - 1e-12 || s.upper_max > b.soc_cap + 1e-12)
        throw InvalidArgument("sweep: threshold ranges must lie within [soc_floor, soc_cap]");
    std::vector<ThresholdPair> out;
    const auto uppers = detail::grid_values(s.upper_min, s.upper_max, s.grid_step);
    for (double lo : detail::grid_values(s.lower_min, s.lower_max, s.grid_step))
        for (double up : uppers)
            if (up > lo + 1e-12) out.push_back({lo, up});
    return out;
}

/// Pair with least fuel among cells feasible in every column of `fuel`.
inline std::optional<ThresholdPair> pick_best(const std::vector<ThresholdPair>& pairs,
                                              const std::vector<double>& fuel, const std::vector<bool>& feasible) {
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (!feasible[i]) continue;
        if (!best || fuel[i] < fuel[*best] ||
            (fuel[i] == fuel[*best] && detail::preferred_on_tie(pairs[i], pairs[*best])))
            best = i;
    }
    if (!best) return std::nullopt;
    return pairs[*best];
}

/// One bang-bang simulation per threshold pair.
inline SweepReport threshold_sweep(const MissionModel& m, const std::string& name, const SweepSettings& s,
                                   unsigned jobs = default_jobs()) {
    const auto pairs = threshold_grid(s, m.trailer().batt);
    SweepReport rep;
    rep.cycle_name = name;
    rep.grid.resize(pairs.size());
    parallel_for(pairs.size(), jobs, [&](std::size_t i) {
        const auto r = simulate(m, ReactivePolicy::bangbang(pairs[i].lower, pairs[i].upper), false).result;
        rep.grid[i] = {pairs[i].lower, pairs[i].upper, r.extra_fuel_L, r.feasible};
    });
    std::vector<double> fuel;
    std::vector<bool> feasible;
    for (const auto& c : rep.grid) {
        fuel.push_back(c.extra_fuel_L);
        feasible.push_back(c.feasible);
    }
    rep.best = pick_best(pairs, fuel, feasible);
    return rep;
}

/// Thresholds feasible on every sweep with the least summed extra fuel.
inline ThresholdPair general_bangbang(const std::vector<SweepReport>& sweeps) {
    if (sweeps.empty()) throw InvalidArgument("general_bangbang: needs at least one mission");
    const std::size_t cells = sweeps.front().grid.size();
    std::vector<ThresholdPair> pairs;
    std::vector<double> fuel(cells, 0.0);
    std::vector<bool> feasible(cells, true);
    for (const auto& c : sweeps.front().grid) pairs.push_back({c.lower, c.upper});
    for (const auto& sw : sweeps) {
        if (sw.grid.size() != cells) throw InvalidArgument("general_bangbang: sweeps use different grids");
        for (std::size_t i = 0; i < cells; ++i) {
            fuel[i] += sw.grid[i].extra_fuel_L;
            feasible[i] = feasible[i] && sw.grid[i].feasible;
        }
    }
    const auto best = pick_best(pairs, fuel, feasible);
    if (!best) throw InfeasibleError("general bang-bang: no threshold pair completes every mission");
    return *best;
}

inline ThresholdPair general_bangbang(const std::vector<MissionModel>& missions, const SweepSettings& s,
                                      unsigned jobs = default_jobs()) {
    std::vector<SweepReport> sweeps;
    for (const auto& m : missions) sweeps.push_back(threshold_sweep(m, "", s, jobs));
    return general_bangbang(sweeps);
}

inline const std::vector<std::string>& strategy_names() {
    static const std::vector<std::string> names{"constant", "general_bangbang", "optimal_bangbang", "global_optimum"};
    return names;
}

struct ComparisonReport {
    std::string cycle;
    std::map<std::string, StrategyResult> strategies;  // keyed by strategy_names()
    std::map<std::string, double> savings_pct;
    ThresholdPair general_thresholds;
    ThresholdPair optimal_thresholds;

    bool operator==(const ComparisonReport&) const = default;
};

/// (worse - better) / worse in percent; 0 when the worse strategy needs no fuel.
inline double saving_pct(double worse, double better) { return worse > 0 ? (worse - better) / worse * 100.0 : 0.0; }

struct NamedMission {
    std::string name;
    DriveCycle mission;
};

struct ComparisonRun {
    std::vector<ComparisonReport> reports;
    std::vector<SweepReport> sweeps;
    std::vector<std::map<std::string, SimTrace>> traces;  // per mission, per strategy
};

/// Runs the four strategies on every mission.
inline ComparisonRun compare_strategies(const std::vector<NamedMission>& missions, const VehicleParams& vp,
                                        const TrailerParams& tp, const SweepSettings& s,
                                        unsigned jobs = default_jobs()) {
    if (missions.empty()) throw InvalidArgument("compare: no missions");
    std::vector<MissionModel> models;
    models.reserve(missions.size());
    for (const auto& nm : missions) models.emplace_back(nm.mission, vp, tp);

    ComparisonRun run;
    for (std::size_t i = 0; i < models.size(); ++i)
        run.sweeps.push_back(threshold_sweep(models[i], missions[i].name, s, jobs));
    const auto general = general_bangbang(run.sweeps);

    run.reports.resize(models.size());
    run.traces.resize(models.size());
    parallel_for(models.size(), jobs, [&](std::size_t i) {
        const auto& m = models[i];
        if (!run.sweeps[i].best)
            throw InfeasibleError("compare: no feasible bang-bang thresholds for " + missions[i].name);
        const auto optimal = *run.sweeps[i].best;
        auto constant = simulate(m, ReactivePolicy::constant());
        auto gen = simulate(m, ReactivePolicy::bangbang(general.lower, general.upper));
        auto opt = simulate(m, ReactivePolicy::bangbang(optimal.lower, optimal.upper));
        const auto greedy = greedy_optimize(m);
        auto best = simulate(m, greedy.schedule);

        auto& rep = run.reports[i];
        rep.cycle = missions[i].name;
        rep.general_thresholds = general;
        rep.optimal_thresholds = optimal;
        rep.strategies["constant"] = constant.result;
        rep.strategies["general_bangbang"] = gen.result;
        rep.strategies["optimal_bangbang"] = opt.result;
        rep.strategies["global_optimum"] = best.result;
        const double c = constant.result.extra_fuel_L, g = gen.result.extra_fuel_L;
        const double o = opt.result.extra_fuel_L, x = best.result.extra_fuel_L;
        rep.savings_pct["optimum_vs_constant"] = saving_pct(c, x);
        rep.savings_pct["optimum_vs_general_bangbang"] = saving_pct(g, x);
        rep.savings_pct["optimum_vs_optimal_bangbang"] = saving_pct(o, x);
        rep.savings_pct["optimal_bangbang_vs_constant"] = saving_pct(c, o);
        rep.savings_pct["general_bangbang_vs_constant"] = saving_pct(c, g);

        auto& tr = run.traces[i];
        tr["constant"] = std::move(constant.trace);
        tr["general_bangbang"] = std::move(gen.trace);
        tr["optimal_bangbang"] = std::move(opt.trace);
        tr["global_optimum"] = std::move(best.trace);
    });
    return run;
}

} // namespace reefer
