#include "reefer/cycle.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace reefer;

namespace {

const VehicleParams vp{};

DriveCycle constant_cycle(double v, std::size_t n, double dt = 1.0) {
    DriveCycle c;
    c.dt_s = dt;
    for (std::size_t i = 0; i < n; ++i) c.points.push_back({static_cast<double>(i) * dt, v, 0.0});
    return c;
}

double trapezoid_distance(const DriveCycle& c) {
    double d = 0;
    for (std::size_t i = 1; i < c.size(); ++i)
        d += 0.5 * (c.points[i].speed_mps + c.points[i - 1].speed_mps) * (c.points[i].time_s - c.points[i - 1].time_s);
    return d;
}

} // namespace

TEST(LoadCycle, TwoPoints) {
    const auto c = load_cycle("time_s,speed_mps,grade_pct\n0,0,0\n1,1.5,0\n", "t");
    ASSERT_EQ(c.size(), 2u);
    EXPECT_DOUBLE_EQ(c.span_s(), 1.0);
    EXPECT_DOUBLE_EQ(c.dt_s, 1.0);
    EXPECT_DOUBLE_EQ(c.points[1].speed_mps, 1.5);
    EXPECT_TRUE(c.breaks.empty());
    EXPECT_EQ(c.name, "t");
}

TEST(LoadCycle, NegativeSpeedNamesLine) {
    try {
        load_cycle("time_s,speed_mps,grade_pct\n0,0,0\n1,-1,0\n", "t");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
    }
}

TEST(LoadCycle, Malformed) {
    EXPECT_THROW(load_cycle("t,v,g\n0,0,0\n1,0,0\n", "t"), ParseError);
    EXPECT_THROW(load_cycle("time_s,speed_mps,grade_pct\n0,0,0\n1,x,0\n", "t"), ParseError);
    EXPECT_THROW(load_cycle("time_s,speed_mps,grade_pct\n0,0,0\n0,1,0\n", "t"), ParseError);
    EXPECT_THROW(load_cycle("time_s,speed_mps,grade_pct\n0,0,0\n1,1\n", "t"), ParseError);
    EXPECT_THROW(load_cycle("time_s,speed_mps,grade_pct\n0,0,0\n", "t"), ParseError);
}

TEST(LoadCycle, CrlfAndNonUniform) {
    const auto c = load_cycle("time_s,speed_mps,grade_pct\r\n0,0,0\r\n1,1,0\r\n3,2,0\r\n", "t");
    EXPECT_EQ(c.size(), 3u);
    EXPECT_FALSE(c.uniform());
}

TEST(LoadCycle, CsvRoundTripIsExact) {
    const auto c = synthesize_cycle(Profile::regional, 900, 3);
    const auto back = load_cycle(cycle_to_csv(c), c.name);
    EXPECT_EQ(back.points, c.points);
}

TEST(CycleStats, ConstantSpeedHour) {
    const auto s = cycle_stats(constant_cycle(25, 3600), vp);
    EXPECT_NEAR(s.distance_km, 90.0, 1e-9);
}

TEST(CycleStats, ConstantSpeedShort) {
    const auto s = cycle_stats(constant_cycle(20, 100), vp);
    EXPECT_NEAR(s.distance_km, 2.0, 1e-12);
    EXPECT_EQ(s.stop_count, 0u);
}

TEST(CycleStats, AllZero) {
    const auto s = cycle_stats(constant_cycle(0, 100), vp);
    EXPECT_EQ(s.distance_km, 0.0);
    EXPECT_EQ(s.braking_energy_fraction, 0.0);
    EXPECT_EQ(s.stop_count, 1u);
}

TEST(CycleStats, StopsNeedFiveSeconds) {
    DriveCycle c = constant_cycle(10, 40);
    for (std::size_t i = 5; i < 9; ++i) c.points[i].speed_mps = 0;    // 4 s: not a stop
    for (std::size_t i = 20; i < 25; ++i) c.points[i].speed_mps = 0;  // 5 s: a stop
    EXPECT_EQ(cycle_stats(c, vp).stop_count, 1u);
}

TEST(CycleStats, UrbanBrakesMoreThanLonghaul) {
    for (std::uint64_t seed : {1u, 2u, 42u}) {
        const auto u = cycle_stats(synthesize_cycle(Profile::urban, 7200, seed), vp);
        const auto l = cycle_stats(synthesize_cycle(Profile::longhaul, 7200, seed), vp);
        EXPECT_GT(u.braking_energy_fraction, l.braking_energy_fraction) << seed;
    }
}

TEST(Synthesize, LonghaulCruise) {
    const auto c = synthesize_cycle(Profile::longhaul, 7200, 42);
    const auto s = cycle_stats(c, vp);
    EXPECT_GE(s.mean_moving_speed_kmh, 75.0);
    EXPECT_LE(s.mean_moving_speed_kmh, 85.0);
    double moving = 0, in_band = 0;
    for (const auto& p : c.points) {
        if (p.speed_mps <= 0) continue;
        moving += 1;
        const double kmh = p.speed_mps * 3.6;
        if (kmh >= 80 - 1e-9 && kmh <= 85 + 1e-9) in_band += 1;
    }
    EXPECT_GE(in_band / moving, 0.85);
}

TEST(Synthesize, UrbanStops) {
    const auto c = synthesize_cycle(Profile::urban, 7200, 42);
    EXPECT_GE(cycle_stats(c, vp).stop_count, 10u);
    double peak = 0;
    for (const auto& p : c.points) peak = std::max(peak, p.speed_mps * 3.6);
    EXPECT_GE(peak, 40.0);
    EXPECT_LE(peak, 60.0 + 1e-9);
}

TEST(Synthesize, RegionalBand) {
    const auto c = synthesize_cycle(Profile::regional, 7200, 42);
    double peak = 0;
    for (const auto& p : c.points) peak = std::max(peak, p.speed_mps * 3.6);
    EXPECT_GE(peak, 50.0);
    EXPECT_LE(peak, 80.0 + 1e-9);
    EXPECT_GE(cycle_stats(c, vp).stop_count, 1u);
}

TEST(Synthesize, ShapeInvariants) {
    for (auto p : {Profile::urban, Profile::regional, Profile::longhaul}) {
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            const auto c = synthesize_cycle(p, 3600, seed);
            ASSERT_TRUE(c.uniform());
            EXPECT_EQ(c.points.front().speed_mps, 0.0);
            EXPECT_EQ(c.points.back().speed_mps, 0.0);
            for (const auto& pt : c.points) {
                EXPECT_LE(std::abs(pt.grade_pct), 4.0);
                EXPECT_GE(pt.speed_mps, 0.0);
            }
        }
    }
}

TEST(Synthesize, Deterministic) {
    EXPECT_EQ(synthesize_cycle(Profile::urban, 7200, 42), synthesize_cycle(Profile::urban, 7200, 42));
    EXPECT_NE(synthesize_cycle(Profile::urban, 7200, 42).points, synthesize_cycle(Profile::urban, 7200, 43).points);
}

TEST(Synthesize, Preconditions) {
    EXPECT_THROW(synthesize_cycle(Profile::urban, 300, 1), InvalidArgument);
    EXPECT_THROW(parse_profile("suburban"), InvalidArgument);
    EXPECT_EQ(parse_profile("longhaul"), Profile::longhaul);
}

TEST(ComposeMission, Duration) {
    DriveCycle c = constant_cycle(10, 7200);
    c.points.front().speed_mps = 0;
    c.points.back().speed_mps = 0;
    const auto m = compose_mission(c, 3, 2700);
    EXPECT_DOUBLE_EQ(m.duration_s(), 27000.0);
    EXPECT_DOUBLE_EQ(m.duration_s(), 3 * c.duration_s() + 2 * 2700.0);
    ASSERT_EQ(m.breaks.size(), 2u);
    EXPECT_DOUBLE_EQ(m.breaks[0].start_s, 7200.0);
    EXPECT_DOUBLE_EQ(m.breaks[1].start_s, 7200.0 * 2 + 2700.0);
    for (std::size_t i = 0; i < m.size(); ++i) {
        EXPECT_DOUBLE_EQ(m.points[i].time_s, static_cast<double>(i));
        if (m.in_break(i)) {
            EXPECT_EQ(m.points[i].speed_mps, 0.0);
        }
    }
}

TEST(ComposeMission, SingleRepeatIsIdentity) {
    const auto c = synthesize_cycle(Profile::urban, 1200, 7);
    const auto m = compose_mission(c, 1, 2700);
    EXPECT_EQ(m, c);
    EXPECT_TRUE(m.breaks.empty());
}

TEST(ComposeMission, MustEndAtStandstill) {
    DriveCycle c = constant_cycle(5, 100);
    c.points.front().speed_mps = 0;
    EXPECT_THROW(compose_mission(c, 2, 60), InvalidArgument);
}

TEST(Resample, IdentityOnSameGrid) {
    const auto c = synthesize_cycle(Profile::urban, 1200, 2);
    EXPECT_EQ(resample(c, 1.0).points, c.points);
}

TEST(Resample, Ramp) {
    const auto c = load_cycle("time_s,speed_mps,grade_pct\n0,0,0\n10,10,0\n", "ramp");
    const auto r = resample(c, 1.0);
    ASSERT_EQ(r.size(), 11u);
    for (std::size_t i = 0; i <= 10; ++i) EXPECT_NEAR(r.points[i].speed_mps, static_cast<double>(i), 1e-12);
}

TEST(Resample, PreservesDistance) {
    // Urban cycle thinned to irregular sample times, then brought back to 1 s.
    const auto base = synthesize_cycle(Profile::urban, 3600, 11);
    DriveCycle sparse;
    sparse.name = base.name;
    for (std::size_t i = 0; i < base.size(); i += (i % 3) + 1) sparse.points.push_back(base.points[i]);
    if (sparse.points.back().time_s != base.points.back().time_s) sparse.points.push_back(base.points.back());
    const auto r = resample(sparse, 1.0);
    const double before = trapezoid_distance(sparse);
    const double after = trapezoid_distance(r);
    EXPECT_LT(std::abs(after - before) / before, 1e-3);

    const auto half = resample(base, 0.5);
    EXPECT_LT(std::abs(trapezoid_distance(half) - trapezoid_distance(base)) / trapezoid_distance(base), 1e-3);
}

TEST(Resample, RejectsBadStep) { EXPECT_THROW(resample(constant_cycle(1, 3), 0.0), InvalidArgument); }
