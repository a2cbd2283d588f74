#pragma once

// Small randomized missions for checking the optimizers against each other.

#include "reefer/ems.hpp"
#include "reefer/rng.hpp"
#include "reefer/simulate.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>

namespace reefer::testing {

struct Toy {
    DriveCycle mission;
    TrailerParams trailer;
};

/// 6..12 one-second steps with a drifting speed and random grades. The
/// battery is sized so the TRU alone needs 1.1x..2x the usable band, which
/// forces towing on most draws.
inline Toy random_toy(std::uint64_t seed, double soc_init = 0.6) {
    Rng rng(seed);
    Toy t;
    t.trailer.batt.soc_init = soc_init;
    const std::size_t n = 6 + rng.below(7);
    const double band = soc_init - t.trailer.batt.soc_floor;
    t.trailer.batt.capacity_wh =
        static_cast<double>(n) * t.trailer.p_tru_w / t.trailer.batt.eta_discharge / 3600.0 / (band * rng.uniform(1.1, 2.0));
    t.mission.dt_s = 1.0;
    t.mission.name = "toy";
    double v = rng.uniform(5.0, 25.0);
    for (std::size_t k = 0; k < n; ++k) {
        t.mission.points.push_back({static_cast<double>(k), v, rng.uniform(-2.0, 3.0)});
        v = std::clamp(v + rng.uniform(-1.5, 0.8), 1.0, 30.0);
    }
    return t;
}

/// Toys where doing nothing fails and towing everywhere succeeds.
inline std::vector<Toy> toy_suite(std::size_t count, double soc_init = 0.6) {
    const VehicleParams vp;
    std::vector<Toy> out;
    for (std::uint64_t seed = 1; out.size() < count; ++seed) {
        auto t = random_toy(seed, soc_init);
        const MissionModel m(t.mission, vp, t.trailer);
        if (simulate(m, TowingSchedule(m.size()), false).result.feasible) continue;
        if (!simulate(m, ReactivePolicy::constant(), false).result.feasible) continue;
        out.push_back(std::move(t));
    }
    return out;
}

/// Fuel worth of one DP grid step of battery energy at the dearest towing step.
inline double dp_tolerance(const MissionModel& m, double grid_step) {
    const auto& tp = m.trailer();
    double worst_L_per_kwh = 0.0;
    for (std::size_t k = 0; k < m.size(); ++k) {
        const auto& s = m[k];
        if (!s.tow_ok) continue;
        const double kwh_per_s = tp.eta_gen * s.tow_force_n * s.v_mps / 3.6e6;
        worst_L_per_kwh = std::max(worst_L_per_kwh, s.tow_extra_Lps / kwh_per_s);
    }
    return grid_step * tp.batt.capacity_wh / 1000.0 * worst_L_per_kwh;
}

inline bool same_fuel(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)); }

} // namespace reefer::testing

namespace reefer::testing {

/// True when every scheduled tow of `s` ran at the full generator force.
inline bool runs_unclipped(const MissionModel& m, const TowingSchedule& s) {
    const auto sim = simulate(m, s);
    if (sim.result.demoted_steps != 0) return false;
    for (std::size_t k = 0; k < m.size(); ++k) {
        if (!s.active[k]) continue;
        const double full = m.trailer().eta_gen * (m[k].tow_force_n * m[k].v_mps);
        if (sim.trace[k].p_tow_elec_w != full) return false;
    }
    return true;
}

struct SchedulePair {
    TowingSchedule a, b;  // a is a subset of b
};

/// Random nested schedules over statically admissible steps, drawn until the
/// larger one tows at full force everywhere it is scheduled.
inline std::optional<SchedulePair> random_nested_pair(const MissionModel& m, Rng& rng, int attempts = 50) {
    std::vector<std::size_t> ok;
    for (std::size_t k = 0; k < m.size(); ++k)
        if (m[k].tow_ok) ok.push_back(k);
    for (int i = 0; i < attempts; ++i) {
        const double density = rng.uniform(0.0, 0.5);
        const double keep = rng.unit();
        SchedulePair p{TowingSchedule(m.size()), TowingSchedule(m.size())};
        for (auto k : ok) {
            if (!rng.coin(density)) continue;
            p.b.active[k] = true;
            p.a.active[k] = rng.coin(keep);
        }
        if (runs_unclipped(m, p.b)) return p;
    }
    return std::nullopt;
}

} // namespace reefer::testing
