#pragma once

// JSON and CSV serialization of strategy results, sweeps and comparisons.
// JSON numbers round-trip exactly; CSV numbers carry six significant digits.

#include "reefer/error.hpp"
#include "reefer/format.hpp"
#include "reefer/harness.hpp"
#include "reefer/simulate.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

namespace reefer {

using Json = nlohmann::ordered_json;

enum class ReportFormat { json, csv };

inline ReportFormat parse_report_format(std::string_view s) {
    if (s == "json") return ReportFormat::json;
    if (s == "csv") return ReportFormat::csv;
    throw InvalidArgument("unknown report format '" + std::string(s) + "'");
}

inline Json to_json(const StrategyResult& r) {
    Json j;
    j["extra_fuel_L"] = r.extra_fuel_L;
    j["total_fuel_L"] = r.total_fuel_L;
    j["towing_energy_kwh"] = r.towing_energy_kwh;
    j["recup_energy_kwh"] = r.recup_energy_kwh;
    j["min_soc"] = r.min_soc;
    j["min_soc_pct"] = r.min_soc * 100.0;
    j["final_soc"] = r.final_soc;
    j["final_soc_pct"] = r.final_soc * 100.0;
    j["feasible"] = r.feasible;
    j["depleted"] = r.depleted;
    j["towing_steps"] = r.towing_steps;
    j["demoted_steps"] = r.demoted_steps;
    j["saturated_steps"] = r.saturated_steps;
    j["first_violation"] = r.first_violation == no_step ? Json(nullptr) : Json(r.first_violation);
    return j;
}

inline StrategyResult strategy_result_from_json(const Json& j) {
    try {
        StrategyResult r;
        r.extra_fuel_L = j.at("extra_fuel_L").get<double>();
        r.total_fuel_L = j.at("total_fuel_L").get<double>();
        r.towing_energy_kwh = j.at("towing_energy_kwh").get<double>();
        r.recup_energy_kwh = j.at("recup_energy_kwh").get<double>();
        r.min_soc = j.at("min_soc").get<double>();
        r.final_soc = j.at("final_soc").get<double>();
        r.feasible = j.at("feasible").get<bool>();
        r.depleted = j.at("depleted").get<bool>();
        r.towing_steps = j.at("towing_steps").get<std::size_t>();
        r.demoted_steps = j.at("demoted_steps").get<std::size_t>();
        r.saturated_steps = j.at("saturated_steps").get<std::size_t>();
        const auto& fv = j.at("first_violation");
        r.first_violation = fv.is_null() ? no_step : fv.get<std::size_t>();
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("strategy result: ") + e.what());
    }
}

inline Json to_json(const ThresholdPair& p) { return Json{{"lower", p.lower}, {"upper", p.upper}}; }

inline ThresholdPair threshold_pair_from_json(const Json& j) {
    return {j.at("lower").get<double>(), j.at("upper").get<double>()};
}

inline Json to_json(const SweepReport& r) {
    Json j;
    j["cycle"] = r.cycle_name;
    Json grid = Json::array();
    for (const auto& c : r.grid)
        grid.push_back({{"lower", c.lower}, {"upper", c.upper}, {"extra_fuel_L", c.extra_fuel_L}, {"feasible", c.feasible}});
    j["grid"] = std::move(grid);
    j["best"] = r.best ? to_json(*r.best) : Json(nullptr);
    return j;
}

inline SweepReport sweep_report_from_json(const Json& j) {
    try {
        SweepReport r;
        r.cycle_name = j.at("cycle").get<std::string>();
        for (const auto& c : j.at("grid"))
            r.grid.push_back({c.at("lower").get<double>(), c.at("upper").get<double>(),
                              c.at("extra_fuel_L").get<double>(), c.at("feasible").get<bool>()});
        if (!j.at("best").is_null()) r.best = threshold_pair_from_json(j.at("best"));
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("sweep report: ") + e.what());
    }
}

inline Json to_json(const ComparisonReport& r) {
    Json j;
    j["cycle"] = r.cycle;
    Json strategies = Json::object();
    for (const auto& name : strategy_names()) {
        const auto it = r.strategies.find(name);
        if (it != r.strategies.end()) strategies[name] = to_json(it->second);
    }
    j["strategies"] = std::move(strategies);
    Json savings = Json::object();
    for (const auto& [k, v] : r.savings_pct) savings[k] = v;
    j["savings_pct"] = std::move(savings);
    j["thresholds"] = {{"general_bangbang", to_json(r.general_thresholds)},
                       {"optimal_bangbang", to_json(r.optimal_thresholds)}};
    return j;
}

inline ComparisonReport comparison_report_from_json(const Json& j) {
    try {
        ComparisonReport r;
        r.cycle = j.at("cycle").get<std::string>();
        for (const auto& [name, v] : j.at("strategies").items()) r.strategies[name] = strategy_result_from_json(v);
        for (const auto& [k, v] : j.at("savings_pct").items()) r.savings_pct[k] = v.get<double>();
        r.general_thresholds = threshold_pair_from_json(j.at("thresholds").at("general_bangbang"));
        r.optimal_thresholds = threshold_pair_from_json(j.at("thresholds").at("optimal_bangbang"));
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("comparison report: ") + e.what());
    }
}

inline std::string sweep_to_csv(const SweepReport& r) {
    std::string out = "lower,upper,extra_fuel_L,feasible\n";
    for (const auto& c : r.grid)
        out += format_sig6(c.lower) + ',' + format_sig6(c.upper) + ',' + format_sig6(c.extra_fuel_L) + ',' +
               (c.feasible ? "1" : "0") + '\n';
    return out;
}

inline std::string comparison_to_csv(const std::vector<ComparisonReport>& reports) {
    std::string out = "cycle,strategy,extra_fuel_L,total_fuel_L,min_soc,final_soc,feasible\n";
    for (const auto& r : reports) {
        for (const auto& name : strategy_names()) {
            const auto it = r.strategies.find(name);
            if (it == r.strategies.end()) continue;
            const auto& s = it->second;
            out += r.cycle + ',' + name + ',' + format_sig6(s.extra_fuel_L) + ',' + format_sig6(s.total_fuel_L) + ',' +
                   format_sig6(s.min_soc) + ',' + format_sig6(s.final_soc) + ',' + (s.feasible ? "1" : "0") + '\n';
        }
    }
    return out;
}

inline std::string export_report(const SweepReport& r, ReportFormat f) {
    return f == ReportFormat::json ? to_json(r).dump(2) + '\n' : sweep_to_csv(r);
}

inline std::string export_report(const std::vector<ComparisonReport>& reports, ReportFormat f) {
    if (f == ReportFormat::csv) return comparison_to_csv(reports);
    Json arr = Json::array();
    for (const auto& r : reports) arr.push_back(to_json(r));
    return arr.dump(2) + '\n';
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("failed reading '" + path + "'");
    return ss.str();
}

inline void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw IoError("failed writing '" + path + "'");
}

} // namespace reefer
