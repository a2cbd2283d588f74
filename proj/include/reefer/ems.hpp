#pragma once

// Towing schedule optimizers.
//
// greedy_optimize is the efficiency-ranked repair loop: simulate, find where
// the battery first drops below its floor, switch on towing at the most
// efficient earlier steps (kWh gained per liter of extra diesel), repeat.
// exhaustive_optimize and dp_optimize are ground-truth oracles for it.

#include "reefer/error.hpp"
#include "reefer/policy.hpp"
#include "reefer/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace reefer {

struct EfficiencyEntry {
    std::size_t step_index = 0;
    double delta_e_kwh = 0.0;   // generator output if towing this step
    double delta_fuel_L = 0.0;  // marginal diesel
    double efficiency_kwh_per_L = 0.0;
};

/// Orders entries by efficiency, best first; equal efficiency keeps the earlier step first.
inline void sort_by_efficiency(std::vector<EfficiencyEntry>& entries) {
    std::stable_sort(entries.begin(), entries.end(), [](const EfficiencyEntry& a, const EfficiencyEntry& b) {
        if (a.efficiency_kwh_per_L != b.efficiency_kwh_per_L) return a.efficiency_kwh_per_L > b.efficiency_kwh_per_L;
        return a.step_index < b.step_index;
    });
}

/// Candidate towing steps up to and including `horizon` that are admissible in
/// `trace` (the simulation of `schedule`) and not already active. SoC is
/// recorded at the end of a step, so towing during the violating step itself
/// still precedes the drop.
inline std::vector<EfficiencyEntry> rank_efficiency(const MissionModel& m, const TowingSchedule& schedule,
                                                    const SimTrace& trace, std::size_t horizon) {
    const auto& tp = m.trailer();
    const double dt = m.dt_s();
    const std::size_t end = horizon >= m.size() ? m.size() : horizon + 1;
    std::vector<EfficiencyEntry> entries;
    for (std::size_t k = 0; k < end; ++k) {
        if (schedule.active[k]) continue;
        const double soc = k == 0 ? tp.batt.soc_init : trace[k - 1].soc_after;
        if (!m.admissible(k, soc)) continue;
        const auto& s = m[k];
        const double full_mech = s.tow_force_n * s.v_mps;
        const double mech = std::min(full_mech, charge_headroom_mech_w(soc, tp, dt));
        const double extra_Lps =
            mech < full_mech ? marginal_towing_fuel(s.f_req_n, mech / s.v_mps, s.v_mps, m.vehicle()) : s.tow_extra_Lps;
        const double de = tp.eta_gen * mech * dt / 3.6e6;
        const double df = extra_Lps * dt;
        if (!(df > 0) || !(de > 0)) continue;
        entries.push_back({k, de, df, de / df});
    }
    sort_by_efficiency(entries);
    return entries;
}

inline std::vector<EfficiencyEntry> rank_efficiency(const MissionModel& m, const TowingSchedule& schedule,
                                                    std::size_t horizon) {
    return rank_efficiency(m, schedule, simulate(m, schedule).trace, horizon);
}

struct GreedyResult {
    TowingSchedule schedule;
    StrategyResult result;
    std::size_t iterations = 0;
    std::vector<std::vector<std::size_t>> batches;  // steps switched on per iteration
};

/// Depth below the floor of the first excursion starting at `horizon`.
inline double first_dip_deficit(const SimTrace& trace, std::size_t horizon, double floor) {
    double lowest = trace[horizon].soc_after;
    for (std::size_t k = horizon; k < trace.size() && trace[k].soc_after < floor; ++k)
        lowest = std::min(lowest, trace[k].soc_after);
    return floor - lowest;
}

/// Efficiency-ranked towing: the cheapest kWh first, only as much as needed to
/// keep the battery above its floor.
inline GreedyResult greedy_optimize(const MissionModel& m) {
    const auto& tp = m.trailer();
    const std::size_t n = m.size();
    if (!simulate(m, ReactivePolicy::constant(), false).result.feasible)
        throw InfeasibleError("infeasible even with maximal towing");

    GreedyResult g;
    g.schedule = TowingSchedule(n);
    for (;;) {
        ++g.iterations;
        auto sim = simulate(m, g.schedule);
        if (sim.result.feasible) {
            g.result = sim.result;
            return g;
        }
        if (g.iterations > n) throw InfeasibleError("greedy: iteration cap reached");
        const std::size_t horizon = sim.result.first_violation;
        const auto entries = rank_efficiency(m, g.schedule, sim.trace, horizon);
        if (entries.empty()) throw InfeasibleError("unsatisfiable: no towing candidates before the violation");

        const double deficit_kwh = first_dip_deficit(sim.trace, horizon, tp.batt.soc_floor) * tp.batt.capacity_wh / 1000.0;
        std::vector<std::size_t> batch;
        double stored_kwh = 0.0;
        for (const auto& e : entries) {
            g.schedule.active[e.step_index] = true;
            batch.push_back(e.step_index);
            stored_kwh += e.delta_e_kwh * tp.batt.eta_charge;
            if (stored_kwh >= deficit_kwh) break;
        }
        g.batches.push_back(std::move(batch));
    }
}

inline GreedyResult greedy_optimize(const DriveCycle& mission, const VehicleParams& vp, const TrailerParams& tp) {
    return greedy_optimize(MissionModel(mission, vp, tp));
}

/// Minimum-extra-fuel feasible schedule by enumeration. Among equal fuel the
/// lexicographically smallest schedule (earliest steps off) wins.
inline TowingSchedule exhaustive_optimize(const MissionModel& m) {
    const std::size_t n = m.size();
    if (n > 22) throw InvalidArgument("exhaustive_optimize: at most 22 steps");
    // Only statically admissible steps can tow; a set bit anywhere else is
    // demoted and yields the same run as a lexicographically smaller schedule.
    std::vector<std::size_t> free_steps;
    for (std::size_t k = 0; k < n; ++k)
        if (m[k].tow_ok) free_steps.push_back(k);
    const std::size_t f = free_steps.size();

    double best_fuel = std::numeric_limits<double>::infinity();
    TowingSchedule best;
    TowingSchedule s(n);
    // Bit (f-1-i) of the mask drives free_steps[i], so ascending masks visit
    // schedules in lexicographic order and the first minimum found is kept.
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << f); ++mask) {
        for (std::size_t i = 0; i < f; ++i) s.active[free_steps[i]] = (mask >> (f - 1 - i)) & 1u;
        const auto r = simulate(m, s, false).result;
        if (r.feasible && r.extra_fuel_L < best_fuel) {
            best_fuel = r.extra_fuel_L;
            best = s;
        }
    }
    if (!std::isfinite(best_fuel)) throw InfeasibleError("exhaustive: no feasible schedule");
    return best;
}

inline TowingSchedule exhaustive_optimize(const DriveCycle& mission, const VehicleParams& vp, const TrailerParams& tp) {
    return exhaustive_optimize(MissionModel(mission, vp, tp));
}

/// Smallest SoC at the start of each step from which the rest of the mission
/// can still be completed above the floor (infinity if none). Entry n is the
/// floor itself. Uses that the one-step SoC map is nondecreasing in SoC.
inline std::vector<double> required_soc(const MissionModel& m) {
    const auto& b = m.trailer().batt;
    const std::size_t n = m.size();
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> r(n + 1, inf);
    r[n] = b.soc_floor;
    const auto reach = [&m](std::size_t k, double soc) {
        double best = advance(m, k, soc, false).soc_after;
        if (m.admissible(k, soc)) best = std::max(best, advance(m, k, soc, true).soc_after);
        return best;
    };
    for (std::size_t k = n; k-- > 0;) {
        if (!std::isfinite(r[k + 1])) break;
        if (reach(k, b.soc_floor) >= r[k + 1]) {
            r[k] = b.soc_floor;
            continue;
        }
        if (reach(k, b.soc_cap) < r[k + 1]) break;
        double lo = b.soc_floor, hi = b.soc_cap;  // reach(lo) < r <= reach(hi)
        for (int it = 0; it < 80 && hi - lo > 1e-15; ++it) {
            const double mid = 0.5 * (lo + hi);
            (reach(k, mid) >= r[k + 1] ? hi : lo) = mid;
        }
        r[k] = hi;
    }
    return r;
}

namespace detail {

/// Fuel-to-go tables for dp_optimize. The grid at step k is laid over SoC
/// measured against the no-towing drift path b_k, so steps without towing map
/// grid points onto grid points and only towing steps need interpolation.
class DpGrid {
public:
    DpGrid(const MissionModel& m, double g, std::vector<double> required)
        : m_(m), g_(g), r_(std::move(required)), base_(m.size() + 1, 0.0), off_(m.size() + 1, 0) {
        const auto& b = m.trailer().batt;
        for (std::size_t k = 0; k < m.size(); ++k)
            base_[k + 1] = base_[k] + (advance(m, k, b.soc_floor, false).soc_after - b.soc_floor);
        for (std::size_t k = 0; k <= m.size(); ++k)
            off_[k] = static_cast<long>(std::ceil((b.soc_floor - base_[k]) / g - 1e-9));
        width_ = static_cast<std::size_t>(std::floor((b.soc_cap - b.soc_floor) / g + 1e-9)) + 2;
    }

    std::size_t width() const { return width_; }
    double soc(std::size_t k, std::size_t i) const {
        return static_cast<double>(off_[k] + static_cast<long>(i)) * g_ + base_[k];
    }
    bool valid(std::size_t k, std::size_t i) const {
        const double s = soc(k, i);
        return s >= r_[k] && s <= m_.trailer().batt.soc_cap + 1e-12;
    }

    /// Values at step n: zero wherever the floor holds.
    std::vector<double> terminal() const {
        std::vector<double> v(width_ + 1, inf);
        for (std::size_t i = 0; i < width_; ++i)
            if (valid(m_.size(), i)) v[i] = 0.0;
        v[width_] = 0.0;
        return v;
    }

    /// Interpolated fuel-to-go at an exact SoC that is completable from step k.
    double value_at(const std::vector<double>& v, std::size_t k, double level) const {
        double u = (level - base_[k]) / g_ - static_cast<double>(off_[k]);
        if (std::abs(u - std::round(u)) < 1e-7) u = std::round(u);
        const double fl = std::floor(u);
        const auto at = [&](double i) {
            return i >= 0 && i < static_cast<double>(width_) ? v[static_cast<std::size_t>(i)] : inf;
        };
        const double v0 = at(fl), v1 = at(fl + 1);
        if (std::isfinite(v0) && std::isfinite(v1)) return v0 + (u - fl) * (v1 - v0);
        if (std::isfinite(v0)) return v0;
        // below the first grid point: interpolate against the frontier node
        if (!std::isfinite(v1)) return v[width_];
        const double span = soc(k, static_cast<std::size_t>(fl + 1)) - r_[k];
        if (span <= 0) return v[width_];
        return v[width_] + (level - r_[k]) / span * (v1 - v[width_]);
    }

    /// Values at step k from values at step k + 1.
    std::vector<double> backward(std::size_t k, const std::vector<double>& next) const {
        std::vector<double> v(width_ + 1, inf);
        const auto best = [&](double s) {
            double b = inf;
            for (bool t : {false, true}) {
                if (t && !m_.admissible(k, s)) continue;
                const auto out = advance(m_, k, s, t);
                if (!(out.soc_after >= r_[k + 1])) continue;
                b = std::min(b, out.fuel_extra_L + value_at(next, k + 1, out.soc_after));
            }
            return b;
        };
        for (std::size_t i = 0; i < width_; ++i)
            if (valid(k, i)) v[i] = best(soc(k, i));
        v[width_] = best(r_[k]);
        return v;
    }

    const std::vector<double>& required() const { return r_; }

    static constexpr double inf = std::numeric_limits<double>::infinity();

private:
    const MissionModel& m_;
    double g_;
    std::vector<double> r_;
    std::vector<double> base_;
    std::vector<long> off_;
    std::size_t width_ = 0;
};

} // namespace detail

/// Backward value iteration over time x discretized SoC.
///
/// Feasibility is exact: a state counts only if its SoC reaches the level of
/// required_soc(). Fuel-to-go is tabulated on a grid of soc_grid_step and
/// interpolated linearly between grid points, with one extra node per step on
/// the feasibility frontier. The forward pass tracks the
/// exact SoC and picks the cheaper completable action at each step. Tables
/// are checkpointed every ~sqrt(n) steps and rebuilt block by block.
inline TowingSchedule dp_optimize(const MissionModel& m, double soc_grid_step) {
    if (!(soc_grid_step >= 1e-4 && soc_grid_step <= 1e-2))
        throw InvalidArgument("dp_optimize: grid step must lie in [1e-4, 1e-2]");
    const auto& b = m.trailer().batt;
    const std::size_t n = m.size();
    const detail::DpGrid grid(m, soc_grid_step, required_soc(m));
    const auto& r = grid.required();
    if (!(b.soc_init >= r[0])) throw InfeasibleError("dp: no feasible policy");

    const auto block = std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(static_cast<double>(n))));
    std::vector<std::vector<double>> checkpoints((n + block - 1) / block + 1);
    std::vector<double> v = grid.terminal();
    checkpoints.back() = v;
    for (std::size_t k = n; k-- > 0;) {
        v = grid.backward(k, v);
        if (k % block == 0) checkpoints[k / block] = v;
    }

    TowingSchedule s(n);
    double soc = b.soc_init;
    std::vector<std::vector<double>> values(block + 1);
    for (std::size_t k0 = 0; k0 < n; k0 += block) {
        const std::size_t k1 = std::min(n, k0 + block);
        values[k1 - k0] = k1 == n ? grid.terminal() : checkpoints[k1 / block];
        for (std::size_t k = k1; k-- > k0 + 1;) values[k - k0] = grid.backward(k, values[k - k0 + 1]);
        for (std::size_t k = k0; k < k1; ++k) {
            const auto& next = values[k - k0 + 1];
            double best = detail::DpGrid::inf;
            bool t = false;
            for (bool cand : {false, true}) {
                if (cand && !m.admissible(k, soc)) continue;
                const auto out = advance(m, k, soc, cand);
                if (!(out.soc_after >= r[k + 1])) continue;
                const double cost = out.fuel_extra_L + grid.value_at(next, k + 1, out.soc_after);
                if (cost < best) {
                    best = cost;
                    t = cand;
                }
            }
            if (!std::isfinite(best)) throw InfeasibleError("dp: lost the feasible region");
            s.active[k] = t;
            soc = advance(m, k, soc, t).soc_after;
        }
    }
    return s;
}

inline TowingSchedule dp_optimize(const DriveCycle& mission, const VehicleParams& vp, const TrailerParams& tp,
                                  double soc_grid_step) {
    return dp_optimize(MissionModel(mission, vp, tp), soc_grid_step);
}

} // namespace reefer
