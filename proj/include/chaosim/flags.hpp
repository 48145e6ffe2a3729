#pragma once

#include <string>

namespace chaosim {

// Per-step validity flags shared by the restart and measurement schedules.
enum StepFlag : unsigned {
    kFlagNone = 0u,
    kFlagTaylorSuspect = 1u << 0,  // omega*tau exceeds the small-time threshold
    kFlagEpsOutOfRange = 1u << 1,  // relative restart time left [0,1]
    kFlagProbOutOfRange = 1u << 2, // quadratic-form probability left [0,1]
    kFlagEscaped = 1u << 3,        // recursion left [0,1]; generation stops here
};

// Small-time validity threshold for the second-order expansion. At
// omega*tau = 0.1 the remainder bound is about 1.7e-4 of the length scale.
inline constexpr double kTaylorSuspectThreshold = 0.1;

// Semicolon-joined uppercase names in a fixed order; empty when no flag set.
inline std::string flag_names(unsigned flags) {
    std::string out;
    auto append = [&out](const char* name) {
        if (!out.empty()) out += ';';
        out += name;
    };
    if (flags & kFlagTaylorSuspect) append("TAYLOR_SUSPECT");
    if (flags & kFlagEpsOutOfRange) append("EPS_OUT_OF_RANGE");
    if (flags & kFlagProbOutOfRange) append("PROB_OUT_OF_RANGE");
    if (flags & kFlagEscaped) append("ESCAPED");
    return out;
}

} // namespace chaosim
