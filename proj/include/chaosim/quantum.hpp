#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "chaosim/flags.hpp"
#include "chaosim/logistic.hpp"

namespace chaosim {

// Two-level vibrator evolving as a real plane rotation, measured against a
// fixed detection state at scheduled moments. The relative measurement
// times follow the same quadratic recursion as the oscillator restarts.

struct QuantumConfig {
    double a = 0.0;     // amplitude on |1> in the detection state
    double b = 0.0;     // amplitude on |2>
    double omega = 0.0; // circular frequency, 1/time, > 0

    void validate() const {
        if (!(omega > 0.0)) throw std::domain_error("QuantumConfig: omega must be positive");
        if (!(a > b && b > 0.0))
            throw std::domain_error("QuantumConfig: amplitudes must satisfy a > b > 0");
        if (std::abs(a * a + b * b - 1.0) > 1e-12)
            throw std::domain_error("QuantumConfig: amplitudes must be normalized");
    }

    /// Builds a detection state from the |1> amplitude alone, b = sqrt(1-a^2).
    static QuantumConfig from_detection_amplitude(double a, double omega) {
        if (!(a > 0.0 && a < 1.0))
            throw std::domain_error("QuantumConfig: a must lie in (0,1)");
        QuantumConfig q{a, std::sqrt(1.0 - a * a), omega};
        q.validate();
        return q;
    }
};

// The probability growth parameter as printed carries 1/omega, which makes
// it dimensional; expanding the detection probability gives the pure number
// (2ab)^2/(a^2-b^2). Both conventions are offered; they coincide at
// omega = 1. The dimensionless one is the default because it is the one the
// probability algebra actually closes under.
enum class GammaConvention { dimensionless, paper_literal };

struct QuantumScales {
    double gamma = 0.0; // probability growth parameter, per the convention
    double t_q = 0.0;   // measurement time scale 2ab/((a^2-b^2)*omega)
    GammaConvention convention = GammaConvention::dimensionless;
};

inline QuantumScales scales(const QuantumConfig& q,
                            GammaConvention convention = GammaConvention::dimensionless) {
    q.validate();
    const double two_ab = 2.0 * q.a * q.b;
    const double diff = (q.a - q.b) * (q.a + q.b); // a^2 - b^2 without cancellation
    QuantumScales s;
    s.convention = convention;
    s.t_q = two_ab / (diff * q.omega);
    s.gamma = two_ab * two_ab / diff;
    if (convention == GammaConvention::paper_literal) s.gamma /= q.omega;
    return s;
}

/// Amplitudes of the evolving state on (|1>, |2>): (cos wt, sin wt).
inline std::pair<double, double> state_amplitudes(double omega, double t) {
    return {std::cos(omega * t), std::sin(omega * t)};
}

/// Evolves an arbitrary real state by the plane rotation for time t.
inline std::pair<double, double> evolve_state(double amp1, double amp2, double omega, double t) {
    const double c = std::cos(omega * t);
    const double s = std::sin(omega * t);
    return {amp1 * c - amp2 * s, amp1 * s + amp2 * c};
}

enum class ProbabilityMode { exact, taylor };

// Quadratic-form probability difference 2ab*wt - (a^2-b^2)*(wt)^2; this is
// the taylor-mode detection probability minus a^2 computed directly, so the
// identity with gamma*eta*(1-eta) is not degraded by the a^2 offset.
inline double detection_probability_difference(const QuantumConfig& q, double t) {
    const double wt = q.omega * t;
    return 2.0 * q.a * q.b * wt - (q.a - q.b) * (q.a + q.b) * wt * wt;
}

/// Probability of detecting the (a, b) state in the evolving state at time t.
/// The exact form is always inside [0,1]; the taylor form may leave it and is
/// reported as computed, never clamped, so the breakdown is visible.
inline double detection_probability(const QuantumConfig& q, double t, ProbabilityMode mode) {
    if (mode == ProbabilityMode::taylor)
        return q.a * q.a + detection_probability_difference(q, t);
    const double overlap =
        q.a * std::cos(q.omega * t) + q.b * std::sin(q.omega * t);
    // overlap is a cosine of a phase difference; rounding can spill a few
    // ulp above 1, which the square must not propagate.
    return std::min(1.0, overlap * overlap);
}

struct MeasurementEntry {
    int n = 0;
    double eta = 0.0;      // relative measurement time
    double tau = 0.0;      // absolute measurement time, t_q * eta
    double p_taylor = 0.0; // quadratic-form detection probability
    double p_exact = 0.0;  // exact detection probability, in [0,1]
    double p_diff = 0.0;   // p_taylor - a^2, the map-shaped difference
    unsigned flags = kFlagNone;
};

struct MeasurementSchedule {
    QuantumConfig config;
    QuantumScales scales;
    std::vector<MeasurementEntry> entries;

    bool escaped() const {
        return !entries.empty() && (entries.back().flags & kFlagEscaped) != 0;
    }
};

/// Generates the measurement schedule eta_1 = tau1/t_q,
/// eta_{n+1} = gamma*eta_n*(1-eta_n), tau_n = t_q*eta_n, with gamma taken
/// from the selected convention.
///
/// Flags per entry: TAYLOR_SUSPECT when omega*tau_n > 0.1, PROB_OUT_OF_RANGE
/// when the quadratic-form probability leaves [0,1], ESCAPED (stops
/// generation) when eta_n leaves [0,1].
inline MeasurementSchedule measurement_schedule(
    const QuantumConfig& q, double tau1, int n_steps,
    GammaConvention convention = GammaConvention::dimensionless) {
    q.validate();
    if (!(tau1 > 0.0))
        throw std::domain_error("measurement_schedule: tau1 must be positive");
    if (n_steps < 1)
        throw std::domain_error("measurement_schedule: n_steps must be at least 1");

    MeasurementSchedule schedule;
    schedule.config = q;
    schedule.scales = scales(q, convention);
    schedule.entries.reserve(static_cast<std::size_t>(n_steps));

    const double gamma = schedule.scales.gamma;
    const double t_q = schedule.scales.t_q;
    double eta = tau1 / t_q;
    for (int n = 1; n <= n_steps; ++n) {
        MeasurementEntry e;
        e.n = n;
        e.eta = eta;
        e.tau = t_q * eta;
        e.p_diff = detection_probability_difference(q, e.tau);
        e.p_taylor = q.a * q.a + e.p_diff;
        e.p_exact = detection_probability(q, e.tau, ProbabilityMode::exact);
        if (q.omega * e.tau > kTaylorSuspectThreshold) e.flags |= kFlagTaylorSuspect;
        if (!(e.p_taylor >= 0.0 && e.p_taylor <= 1.0)) e.flags |= kFlagProbOutOfRange;
        if (!(eta >= 0.0 && eta <= 1.0)) e.flags |= kFlagEscaped;
        schedule.entries.push_back(e);
        if (e.flags & kFlagEscaped) break;
        eta = logistic_step_unchecked(eta, gamma);
    }
    return schedule;
}

/// Time for the detection state to rotate back onto (1, 0):
/// t_s = (2*pi - phi)/omega with phi = atan2(b, a) in (0, pi/4).
inline double return_time(const QuantumConfig& q) {
    q.validate();
    const double phi = std::atan2(q.b, q.a);
    return (2.0 * std::numbers::pi - phi) / q.omega;
}

} // namespace chaosim
