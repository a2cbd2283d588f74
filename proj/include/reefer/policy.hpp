#pragma once

// Reactive towing controllers: always-on and two-threshold hysteresis.

#include "reefer/error.hpp"

namespace reefer {

struct ReactivePolicy {
    enum class Kind { constant, bangbang };

    Kind kind = Kind::constant;
    double lower_soc = 0.0;
    double upper_soc = 1.0;
    bool towing_latched = false;

    static ReactivePolicy constant() { return {Kind::constant, 0.0, 1.0, false}; }

    static ReactivePolicy bangbang(double lower, double upper) {
        if (!(lower < upper)) throw InvalidArgument("bang-bang: lower threshold must be below upper");
        return {Kind::bangbang, lower, upper, false};
    }
};

/// Decides whether to tow this step and updates the hysteresis latch.
/// `admissible` already covers engine headroom and the battery cap.
inline bool policy_step(ReactivePolicy& policy, double soc, bool moving, bool admissible) {
    if (policy.kind == ReactivePolicy::Kind::constant) return moving && admissible;
    if (soc <= policy.lower_soc) policy.towing_latched = true;
    else if (soc >= policy.upper_soc) policy.towing_latched = false;
    return policy.towing_latched && moving && admissible;
}

} // namespace reefer
