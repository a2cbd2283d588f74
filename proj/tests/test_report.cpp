#include "reefer/report.hpp"

#include <gtest/gtest.h>

#include <filesystem>

using namespace reefer;

namespace {

StrategyResult sample_result() {
    StrategyResult r;
    r.total_fuel_L = 101.25;
    r.extra_fuel_L = 1.0 / 3.0;
    r.towing_energy_kwh = 12.5;
    r.recup_energy_kwh = 3.75;
    r.min_soc = 0.2000000123;
    r.final_soc = 0.41;
    r.feasible = true;
    r.towing_steps = 1234;
    r.demoted_steps = 2;
    r.saturated_steps = 7;
    return r;
}

SweepReport sample_sweep() {
    SweepReport s;
    s.cycle_name = "urban";
    s.grid = {{0.2, 0.25, 0.123456789, false}, {0.2, 0.3, 2.0 / 3.0, true}, {0.25, 0.3, 0.5, true}};
    s.best = ThresholdPair{0.25, 0.3};
    return s;
}

ComparisonReport sample_comparison() {
    ComparisonReport c;
    c.cycle = "regional";
    for (const auto& name : strategy_names()) c.strategies[name] = sample_result();
    c.strategies["constant"].first_violation = 17;
    c.savings_pct["optimum_vs_constant"] = 42.5;
    c.general_thresholds = {0.3, 0.55};
    c.optimal_thresholds = {0.25, 0.4};
    return c;
}

} // namespace

TEST(StrategyJson, RoundTripIsLossless) {
    const auto r = sample_result();
    const auto back = strategy_result_from_json(Json::parse(to_json(r).dump()));
    EXPECT_EQ(back, r);
}

TEST(StrategyJson, FieldsAndNullViolation) {
    const auto j = to_json(sample_result());
    EXPECT_TRUE(j.at("first_violation").is_null());
    EXPECT_DOUBLE_EQ(j.at("min_soc_pct").get<double>(), 20.00000123);
    EXPECT_EQ(j.begin().key(), "extra_fuel_L");
}

TEST(SweepJson, RoundTrip) {
    const auto s = sample_sweep();
    EXPECT_EQ(sweep_report_from_json(Json::parse(export_report(s, ReportFormat::json))), s);
    SweepReport none = s;
    none.best.reset();
    EXPECT_EQ(sweep_report_from_json(to_json(none)), none);
}

TEST(SweepJson, MissingKeyIsParseError) {
    auto j = to_json(sample_sweep());
    j.erase("grid");
    EXPECT_THROW(sweep_report_from_json(j), ParseError);
}

TEST(ComparisonJson, RoundTripAndOrder) {
    const auto c = sample_comparison();
    const auto j = to_json(c);
    std::vector<std::string> keys;
    for (const auto& [k, v] : j.at("strategies").items()) keys.push_back(k);
    EXPECT_EQ(keys, strategy_names());
    EXPECT_EQ(comparison_report_from_json(Json::parse(j.dump())), c);
}

TEST(ComparisonJson, ArrayExport) {
    const std::vector<ComparisonReport> v{sample_comparison(), sample_comparison()};
    const auto text = export_report(v, ReportFormat::json);
    EXPECT_EQ(text.back(), '\n');
    const auto j = Json::parse(text);
    ASSERT_TRUE(j.is_array());
    EXPECT_EQ(j.size(), 2u);
}

TEST(SweepCsv, RowsAndSignificantDigits) {
    const auto csv = export_report(sample_sweep(), ReportFormat::csv);
    EXPECT_EQ(csv, "lower,upper,extra_fuel_L,feasible\n"
                   "0.2,0.25,0.123457,0\n"
                   "0.2,0.3,0.666667,1\n"
                   "0.25,0.3,0.5,1\n");
}

TEST(ComparisonCsv, OneRowPerStrategy) {
    const auto csv = comparison_to_csv({sample_comparison()});
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "cycle,strategy,extra_fuel_L,total_fuel_L,min_soc,final_soc,feasible");
    EXPECT_NE(csv.find("regional,constant,0.333333,101.25,0.2,0.41,1\n"), std::string::npos);
}

TEST(Format, Helpers) {
    EXPECT_EQ(format_sig6(1234567.0), "1.23457e+06");
    EXPECT_EQ(format_sig6(0.1), "0.1");
    EXPECT_EQ(format_exact(0.1), "0.1");
    EXPECT_EQ(format_fixed(-0.001, 2), "0.00");
    EXPECT_EQ(parse_report_format("csv"), ReportFormat::csv);
    EXPECT_THROW(parse_report_format("xml"), InvalidArgument);
}

TEST(Files, RoundTripAndErrors) {
    const auto path = (std::filesystem::temp_directory_path() / "reefer_test_report.txt").string();
    write_file(path, "abc\n");
    EXPECT_EQ(read_file(path), "abc\n");
    std::filesystem::remove(path);
    EXPECT_THROW(read_file(path), IoError);
    EXPECT_THROW(write_file("/nonexistent-dir/x/y.txt", "z"), IoError);
}

TEST(ParseErrors, MalformedJson) { EXPECT_THROW(comparison_report_from_json(Json::parse("[1]")), ParseError); }
