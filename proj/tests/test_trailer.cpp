#include "reefer/policy.hpp"
#include "reefer/trailer.hpp"

#include <gtest/gtest.h>

using namespace reefer;

namespace {
const TrailerParams tp{};
}

TEST(TowingForce, Envelope) {
    EXPECT_DOUBLE_EQ(towing_force_max(8.33, tp), 3600.0);
    EXPECT_NEAR(towing_force_max(25, tp), 1199.52, 1e-9);
    EXPECT_EQ(towing_force_max(0, tp), 0.0);
    EXPECT_DOUBLE_EQ(towing_force_max(4, tp), 3600.0);
}

TEST(TowingForce, ContinuousAtBaseSpeed) {
    EXPECT_NEAR(towing_force_max(tp.v_base_mps + 1e-9, tp), towing_force_max(tp.v_base_mps, tp), 1e-6);
}

TEST(TowingForce, ConstantPowerAboveBase) {
    for (double v = 9; v < 30; v += 1.5) EXPECT_NEAR(towing_force_max(v, tp) * v, 3600 * 8.33, 1e-9);
}

TEST(Recuperation, ForceLimited) {
    const auto r = recuperation_power(-5000, 10, {0.5}, tp, 1.0);
    EXPECT_NEAR(r.p_mech_w, 29988.0, 1e-9);
    EXPECT_NEAR(r.p_elec_w, 26989.2, 1e-9);
    EXPECT_NEAR(r.p_mech_w, 30000.0, 15.0);
    EXPECT_NEAR(r.p_elec_w, 27000.0, 15.0);
}

TEST(Recuperation, DemandLimited) {
    const auto r = recuperation_power(-100, 10, {0.5}, tp, 1.0);
    EXPECT_NEAR(r.p_mech_w, 1000.0, 1e-9);
}

TEST(Recuperation, AtCapAllFriction) {
    const auto r = recuperation_power(-5000, 10, {1.0}, tp, 1.0);
    EXPECT_EQ(r.p_mech_w, 0.0);
    EXPECT_EQ(r.p_elec_w, 0.0);
}

TEST(Recuperation, NearCapLimitedByHeadroom) {
    const double soc = 1.0 - 1e-4;
    const auto r = recuperation_power(-5000, 10, {soc}, tp, 1.0);
    const double stored = r.p_elec_w * tp.batt.eta_charge / tp.batt.capacity_j();
    EXPECT_NEAR(soc + stored, 1.0, 1e-12);
}

TEST(Recuperation, Preconditions) {
    EXPECT_THROW(recuperation_power(100, 10, {0.5}, tp, 1.0), InvalidArgument);
    EXPECT_THROW(recuperation_power(-100, 0, {0.5}, tp, 1.0), InvalidArgument);
}

TEST(BatteryStep, TruHourLossless) {
    BatteryParams b;
    b.eta_discharge = 1.0;
    EXPECT_NEAR(battery_step({0.9}, 0, 7000, 3600, b).state.soc, 0.55, 1e-12);
}

TEST(BatteryStep, TruHour) {
    EXPECT_NEAR(battery_step({0.9}, 0, 7000, 3600, tp.batt).state.soc, 0.531578947368421, 1e-12);
}

TEST(BatteryStep, ZeroPower) {
    for (double dt : {0.1, 1.0, 3600.0}) EXPECT_EQ(battery_step({0.42}, 0, 0, dt, tp.batt).state.soc, 0.42);
}

TEST(BatteryStep, DepletionFlagged) {
    const auto s = battery_step({0.01}, 0, 7000, 3600, tp.batt);
    EXPECT_TRUE(s.depleted);
    EXPECT_EQ(s.state.soc, 0.0);
}

TEST(BatteryStep, ChargeAndClamp) {
    const auto s = battery_step({0.5}, 10000, 0, 3600, tp.batt);
    EXPECT_NEAR(s.state.soc, 0.5 + 10 * 0.95 / 20, 1e-12);
    EXPECT_EQ(battery_step({0.99}, 1e6, 0, 3600, tp.batt).state.soc, 1.0);
    EXPECT_THROW(battery_step({0.5}, -1, 0, 1, tp.batt), InvalidArgument);
}

TEST(BatteryParams, Validation) {
    BatteryParams b;
    b.soc_init = 0.1;
    EXPECT_THROW(b.validate(), InvalidArgument);
    TrailerParams t;
    t.eta_gen = 1.5;
    EXPECT_THROW(t.validate(), InvalidArgument);
    EXPECT_NO_THROW(tp.validate());
}

TEST(Policy, BangBangLatchesOnBelowLower) {
    auto p = ReactivePolicy::bangbang(0.45, 0.50);
    EXPECT_TRUE(policy_step(p, 0.44, true, true));
    EXPECT_TRUE(p.towing_latched);
}

TEST(Policy, BangBangClearsAtUpper) {
    auto p = ReactivePolicy::bangbang(0.45, 0.50);
    p.towing_latched = true;
    EXPECT_FALSE(policy_step(p, 0.51, true, true));
    EXPECT_FALSE(p.towing_latched);
}

TEST(Policy, BangBangHysteresis) {
    auto p = ReactivePolicy::bangbang(0.45, 0.50);
    p.towing_latched = true;
    EXPECT_TRUE(policy_step(p, 0.47, true, true));
    p.towing_latched = false;
    EXPECT_FALSE(policy_step(p, 0.47, true, true));
}

TEST(Policy, NeedsMotionAndAdmissibility) {
    auto p = ReactivePolicy::bangbang(0.45, 0.50);
    EXPECT_FALSE(policy_step(p, 0.40, false, true));
    EXPECT_TRUE(p.towing_latched);
    EXPECT_FALSE(policy_step(p, 0.40, true, false));
    auto c = ReactivePolicy::constant();
    EXPECT_TRUE(policy_step(c, 0.99, true, true));
    EXPECT_FALSE(policy_step(c, 0.5, false, true));
    EXPECT_FALSE(policy_step(c, 0.5, true, false));
}

TEST(Policy, ReplayIsDeterministic) {
    const double socs[] = {0.6, 0.5, 0.46, 0.45, 0.44, 0.47, 0.49, 0.50, 0.48, 0.45, 0.52};
    std::vector<bool> first, second;
    for (int run = 0; run < 2; ++run) {
        auto p = ReactivePolicy::bangbang(0.45, 0.50);
        auto& out = run == 0 ? first : second;
        for (double s : socs) out.push_back(policy_step(p, s, true, true));
    }
    EXPECT_EQ(first, second);
    const std::vector<bool> expected{false, false, false, true, true, true, true, false, false, true, false};
    EXPECT_EQ(first, expected);
}

TEST(Policy, InvalidThresholds) { EXPECT_THROW(ReactivePolicy::bangbang(0.5, 0.5), InvalidArgument); }
