#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "chaosim/flags.hpp"
#include "chaosim/logistic.hpp"

namespace chaosim {

// Closed-form linear oscillator plus the restart protocol that drives its
// relative restart times through the quadratic map.
//
// Unit convention, stated once and relied on everywhere: the coordinate
// growth parameter beta = 2*v0^2/(x0*omega^2) carries length units, yet the
// same numeral is the growth parameter of the dimensionless recursion
// eps_{n+1} = beta*eps_n*(1-eps_n). The simulator works in a single
// consistent unit system in which the numeral of the displacement x_n - x0
// equals the next relative restart time eps_{n+1}; that identification is
// what makes the protocol reproduce the map. Displacements are reported in
// the configured length unit, relative times are pure numbers.

struct OscillatorConfig {
    double x0 = 0.0;    // initial coordinate, length, > 0
    double v0 = 0.0;    // initial speed, length/time, > 0
    double omega = 0.0; // circular frequency, 1/time, > 0

    void validate() const {
        if (!(x0 > 0.0)) throw std::domain_error("OscillatorConfig: x0 must be positive");
        if (!(v0 > 0.0)) throw std::domain_error("OscillatorConfig: v0 must be positive");
        if (!(omega > 0.0)) throw std::domain_error("OscillatorConfig: omega must be positive");
    }
};

/// Derived scales of the restart protocol.
struct OscillatorScales {
    double beta = 0.0;   // coordinate growth parameter 2*v0^2/(x0*omega^2)
    double t_star = 0.0; // restart time scale 2*v0/(x0*omega^2)
};

inline OscillatorScales scales(const OscillatorConfig& c) {
    c.validate();
    OscillatorScales s;
    s.beta = 2.0 * c.v0 * c.v0 / (c.x0 * c.omega * c.omega);
    s.t_star = 2.0 * c.v0 / (c.x0 * c.omega * c.omega);
    return s;
}

/// x(t) = x0*cos(omega t) + (v0/omega)*sin(omega t).
inline double exact_position(const OscillatorConfig& c, double t) {
    return c.x0 * std::cos(c.omega * t) + (c.v0 / c.omega) * std::sin(c.omega * t);
}

/// v(t) = -x0*omega*sin(omega t) + v0*cos(omega t).
inline double exact_velocity(const OscillatorConfig& c, double t) {
    return -c.x0 * c.omega * std::sin(c.omega * t) + c.v0 * std::cos(c.omega * t);
}

/// Second-order expansion x0 + v0*t - (1/2)*x0*omega^2*t^2.
inline double taylor_position(const OscillatorConfig& c, double t) {
    return c.x0 + c.v0 * t - 0.5 * c.x0 * c.omega * c.omega * t * t;
}

// Displacement forms x(t) - x0, computed without adding and re-subtracting
// x0. For configs with x0 far larger than the displacement (the regime the
// restart protocol needs) the naive difference would lose most of the
// residual budget to cancellation.
inline double taylor_displacement(const OscillatorConfig& c, double t) {
    return c.v0 * t - 0.5 * c.x0 * c.omega * c.omega * t * t;
}

inline double exact_displacement(const OscillatorConfig& c, double t) {
    const double half = std::sin(0.5 * c.omega * t);
    // x0*(cos(wt)-1) == -2*x0*sin^2(wt/2)
    return (c.v0 / c.omega) * std::sin(c.omega * t) - 2.0 * c.x0 * half * half;
}

/// Rigorous bound on |exact - taylor| from the Lagrange remainders of cos
/// and sin: x0*(wt)^4/24 + (v0/w)*|wt|^3/6.
inline double taylor_error_bound(const OscillatorConfig& c, double t) {
    const double wt = std::abs(c.omega * t);
    const double wt2 = wt * wt;
    return c.x0 * wt2 * wt2 / 24.0 + (c.v0 / c.omega) * wt2 * wt / 6.0;
}

/// Which position law produces the displacement readout of a schedule. The
/// schedule times themselves always follow the relative-time recursion.
enum class PositionMode { taylor, exact };

struct RestartEntry {
    int n = 0;
    double eps = 0.0;                // relative restart time
    double tau = 0.0;                // absolute restart time, eps * t_star
    double delta_x = 0.0;            // displacement at tau under the selected mode
    double omega_tau = 0.0;          // validity measure
    double taylor_error_bound = 0.0; // remainder bound at tau
    unsigned flags = kFlagNone;
};

struct RestartSchedule {
    OscillatorConfig config;
    OscillatorScales scales;
    PositionMode mode = PositionMode::taylor;
    std::vector<RestartEntry> entries;

    bool escaped() const {
        return !entries.empty() && (entries.back().flags & kFlagEscaped) != 0;
    }
};

/// Generates the restart schedule eps_1 = tau1/t_star,
/// eps_{n+1} = beta*eps_n*(1-eps_n), tau_n = eps_n*t_star.
///
/// Flags per entry: TAYLOR_SUSPECT when omega*tau_n > 0.1,
/// EPS_OUT_OF_RANGE when eps_n is outside [0,1], and ESCAPED (which stops
/// generation) when eps_n left [0,1] with beta > 4 or eps_n < 0.
inline RestartSchedule restart_schedule(const OscillatorConfig& c, double tau1, int n_steps,
                                        PositionMode mode) {
    c.validate();
    if (!(tau1 > 0.0))
        throw std::domain_error("restart_schedule: tau1 must be positive");
    if (n_steps < 1)
        throw std::domain_error("restart_schedule: n_steps must be at least 1");

    RestartSchedule schedule;
    schedule.config = c;
    schedule.scales = scales(c);
    schedule.mode = mode;
    schedule.entries.reserve(static_cast<std::size_t>(n_steps));

    const double beta = schedule.scales.beta;
    const double t_star = schedule.scales.t_star;
    double eps = tau1 / t_star;
    for (int n = 1; n <= n_steps; ++n) {
        RestartEntry e;
        e.n = n;
        e.eps = eps;
        e.tau = eps * t_star;
        e.omega_tau = c.omega * e.tau;
        e.delta_x = mode == PositionMode::taylor ? taylor_displacement(c, e.tau)
                                                 : exact_displacement(c, e.tau);
        e.taylor_error_bound = taylor_error_bound(c, e.tau);
        if (e.omega_tau > kTaylorSuspectThreshold) e.flags |= kFlagTaylorSuspect;
        if (!(eps >= 0.0 && eps <= 1.0)) {
            e.flags |= kFlagEpsOutOfRange;
            if (beta > 4.0 || eps < 0.0) e.flags |= kFlagEscaped;
        }
        schedule.entries.push_back(e);
        if (e.flags & kFlagEscaped) break;
        eps = logistic_step_unchecked(eps, beta);
    }
    return schedule;
}

/// Per-step distance of a schedule from the quadratic map. eps_residual is
/// |eps_{n+1} - beta*eps_n*(1-eps_n)| (exactly zero by construction, kept as
/// an executable statement of the protocol); delta_x_residual is
/// |delta_x_n - beta*eps_n*(1-eps_n)| in the configured length unit.
struct StepResidual {
    int n = 0;
    double eps_residual = 0.0;
    double delta_x_residual = 0.0;
};

inline std::vector<StepResidual> compare_to_logistic(const OscillatorConfig& c, double tau1,
                                                     int n_steps,
                                                     PositionMode mode = PositionMode::taylor) {
    const RestartSchedule schedule = restart_schedule(c, tau1, n_steps, mode);
    const double beta = schedule.scales.beta;
    std::vector<StepResidual> residuals;
    residuals.reserve(schedule.entries.size());
    for (std::size_t i = 0; i < schedule.entries.size(); ++i) {
        const RestartEntry& e = schedule.entries[i];
        const double mapped = logistic_step_unchecked(e.eps, beta);
        StepResidual r;
        r.n = e.n;
        r.delta_x_residual = std::abs(e.delta_x - mapped);
        if (i + 1 < schedule.entries.size())
            r.eps_residual = std::abs(schedule.entries[i + 1].eps - mapped);
        residuals.push_back(r);
    }
    return residuals;
}

} // namespace chaosim
