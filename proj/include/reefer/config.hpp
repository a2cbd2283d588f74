#pragma once

// Run configuration as one JSON document. Every field has a default; a file
// may override any subset, and unknown keys are rejected.

#include "reefer/error.hpp"
#include "reefer/harness.hpp"
#include "reefer/powertrain.hpp"
#include "reefer/trailer.hpp"

#include <json.hpp>

#include <functional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace reefer {

struct DpSettings {
    double soc_grid_step = 1e-3;
};

struct Config {
    VehicleParams vehicle;
    TrailerParams trailer;
    SimSettings sim;
    SweepSettings sweep;
    DpSettings dp;

    void validate() const {
        vehicle.validate();
        trailer.validate();
        if (!(sim.dt_s > 0)) throw InvalidArgument("sim.dt_s must be positive");
        if (sim.repeats < 1) throw InvalidArgument("sim.repeats must be at least 1");
        if (!(sim.break_s >= 0)) throw InvalidArgument("sim.break_s must be non-negative");
        threshold_grid(sweep, trailer.batt);
        if (!(dp.soc_grid_step >= 1e-4 && dp.soc_grid_step <= 1e-2))
            throw InvalidArgument("dp.soc_grid_step must lie in [1e-4, 1e-2]");
    }
};

namespace detail {

using OJson = nlohmann::ordered_json;

// Binds JSON keys of one object to struct members in both directions.
class Section {
public:
    explicit Section(std::string path) : path_(std::move(path)) {}

    Section& num(const char* key, double& v) {
        fields_.push_back({key, [&v] { return OJson(v); }, [&v, this, key](const OJson& j) {
                               if (!j.is_number()) fail(key, "a number");
                               v = j.get<double>();
                           }});
        return *this;
    }
    Section& integer(const char* key, int& v) {
        fields_.push_back({key, [&v] { return OJson(v); }, [&v, this, key](const OJson& j) {
                               if (!j.is_number_integer()) fail(key, "an integer");
                               v = j.get<int>();
                           }});
        return *this;
    }
    Section& list(const char* key, std::vector<double>& v) {
        fields_.push_back({key, [&v] { return OJson(v); }, [&v, this, key](const OJson& j) {
                               if (!j.is_array()) fail(key, "an array of numbers");
                               std::vector<double> out;
                               for (const auto& x : j) {
                                   if (!x.is_number()) fail(key, "an array of numbers");
                                   out.push_back(x.get<double>());
                               }
                               v = std::move(out);
                           }});
        return *this;
    }
    Section& range(const char* key, double& lo, double& hi) {
        fields_.push_back({key, [&lo, &hi] { return OJson::array({lo, hi}); },
                           [&lo, &hi, this, key](const OJson& j) {
                               if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
                                   fail(key, "a [min, max] pair");
                               lo = j[0].get<double>();
                               hi = j[1].get<double>();
                           }});
        return *this;
    }
    Section& child(const char* key, Section& s) {
        fields_.push_back({key, [&s] { return s.dump(); }, [&s](const OJson& j) { s.load(j); }});
        return *this;
    }

    OJson dump() const {
        OJson j = OJson::object();
        for (const auto& f : fields_) j[f.key] = f.get();
        return j;
    }

    void load(const OJson& j) const {
        if (!j.is_object()) throw ParseError("config: '" + path_ + "' must be an object");
        for (const auto& [key, value] : j.items()) {
            const Field* hit = nullptr;
            for (const auto& f : fields_)
                if (f.key == key) hit = &f;
            if (!hit) throw ParseError("config: unknown key '" + qualified(key) + "'");
            hit->set(value);
        }
    }

private:
    struct Field {
        std::string key;
        std::function<OJson()> get;
        std::function<void(const OJson&)> set;
    };

    std::string qualified(const std::string& key) const { return path_.empty() ? key : path_ + '.' + key; }
    [[noreturn]] void fail(const char* key, const char* what) const {
        throw ParseError("config: '" + qualified(key) + "' must be " + what);
    }

    std::string path_;
    std::vector<Field> fields_;
};

// Applies `fn` to the root section of a schema bound to `c`.
template <class Fn>
auto with_schema(Config& c, Fn&& fn) {
    auto& e = c.vehicle.engine;
    Section engine("vehicle.engine");
    engine.num("tau_max_nm", e.tau_max_nm)
        .num("rpm_idle", e.rpm_idle)
        .num("rpm_plateau_lo", e.rpm_plateau_lo)
        .num("rpm_plateau_hi", e.rpm_plateau_hi)
        .num("rpm_max", e.rpm_max)
        .num("eta_max", e.eta_max)
        .num("rpm_opt", e.rpm_opt)
        .num("c_speed", e.c_speed)
        .num("c_load", e.c_load)
        .num("lhv_J_per_L", e.lhv_vol_Jpl);

    auto& v = c.vehicle;
    Section vehicle("vehicle");
    vehicle.num("mass_kg", v.mass_kg)
        .num("crr", v.crr)
        .num("cda_m2", v.cda_m2)
        .num("rho_air_kgm3", v.rho_air_kgm3)
        .num("g_ms2", v.g_ms2)
        .num("wheel_radius_m", v.wheel_radius_m)
        .num("driveline_eff", v.driveline_eff)
        .list("gear_ratios", v.gear_ratios)
        .num("final_drive_ratio", v.final_drive_ratio)
        .num("idle_fuel_Lps", v.idle_fuel_Lps)
        .child("engine", engine);

    auto& b = c.trailer.batt;
    Section battery("trailer.battery");
    battery.num("capacity_wh", b.capacity_wh)
        .num("eta_charge", b.eta_charge)
        .num("eta_discharge", b.eta_discharge)
        .num("soc_init", b.soc_init)
        .num("soc_floor", b.soc_floor)
        .num("soc_cap", b.soc_cap);

    auto& t = c.trailer;
    Section trailer("trailer");
    trailer.num("p_gen_rated_w", t.p_gen_rated_w)
        .num("f_tow_max_n", t.f_tow_max_n)
        .num("v_base_mps", t.v_base_mps)
        .num("eta_gen", t.eta_gen)
        .num("p_tru_w", t.p_tru_w)
        .child("battery", battery);

    Section sim("sim");
    sim.num("dt_s", c.sim.dt_s).integer("repeats", c.sim.repeats).num("break_s", c.sim.break_s);

    Section sweep("sweep");
    sweep.num("grid_step", c.sweep.grid_step)
        .range("lower_range", c.sweep.lower_min, c.sweep.lower_max)
        .range("upper_range", c.sweep.upper_min, c.sweep.upper_max);

    Section dp("dp");
    dp.num("soc_grid_step", c.dp.soc_grid_step);

    Section root("");
    root.child("vehicle", vehicle).child("trailer", trailer).child("sim", sim).child("sweep", sweep).child("dp", dp);
    return fn(root);
}

} // namespace detail

inline std::string config_to_json(const Config& c) {
    Config copy = c;
    return detail::with_schema(copy, [](const detail::Section& root) { return root.dump().dump(2) + '\n'; });
}

inline std::string default_config_json() { return config_to_json(Config{}); }

/// Defaults overlaid with the keys present in `text`; the result is validated.
inline Config parse_config(const std::string& text) {
    detail::OJson j;
    try {
        j = detail::OJson::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("config: ") + e.what());
    }
    Config c;
    detail::with_schema(c, [&j](const detail::Section& root) {
        root.load(j);
        return 0;
    });
    c.validate();
    return c;
}

} // namespace reefer
