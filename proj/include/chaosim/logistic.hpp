#pragma once

#include <stdexcept>
#include <vector>

namespace chaosim {

// One step of the quadratic map, evaluated as (alpha*theta)*(1-theta).
// Every recursion in this library (orbits, restart schedules, measurement
// schedules, regime analysis) funnels through this expression, so residual
// checks between modules compare bit-identical arithmetic.
inline double logistic_step_unchecked(double theta, double alpha) noexcept {
    return alpha * theta * (1.0 - theta);
}

/// Checked map step: theta must lie in [0,1] and alpha must be positive.
inline double logistic_step(double theta, double alpha) {
    if (!(theta >= 0.0 && theta <= 1.0))
        throw std::domain_error("logistic_step: theta must lie in [0,1]");
    if (!(alpha > 0.0))
        throw std::domain_error("logistic_step: alpha must be positive");
    return logistic_step_unchecked(theta, alpha);
}

/// Normalized map parameters: theta_n = alpha * theta_{n-1} * (1 - theta_{n-1}).
struct LogisticParams {
    double alpha = 0.0;  // growth parameter, > 0
    double theta0 = 0.0; // initial value in [0,1]; 0 and 1 are legal degenerate seeds

    void validate() const {
        if (!(alpha > 0.0))
            throw std::domain_error("LogisticParams: alpha must be positive");
        if (!(theta0 >= 0.0 && theta0 <= 1.0))
            throw std::domain_error("LogisticParams: theta0 must lie in [0,1]");
    }
};

/// Population-form parameters: x_n = x_{n-1} + a*dt*x_{n-1}*(1 - x_{n-1}/r).
struct PopulationParams {
    double a = 0.0;  // growth rate, 1/time
    double dt = 0.0; // time unit
    double r = 0.0;  // carrying capacity, > 1
    double x0 = 0.0; // initial population, > 0

    // Denominator of the normalization: theta = x / scale().
    double scale() const { return r * (1.0 + a * dt) / (a * dt); }

    void validate() const {
        if (!(a > 0.0)) throw std::domain_error("PopulationParams: a must be positive");
        if (!(dt > 0.0)) throw std::domain_error("PopulationParams: dt must be positive");
        if (!(r > 1.0)) throw std::domain_error("PopulationParams: r must exceed 1");
        if (!(x0 > 0.0)) throw std::domain_error("PopulationParams: x0 must be positive");
        if (!(x0 < scale()))
            throw std::domain_error("PopulationParams: x0 must be below r*(1+a*dt)/(a*dt)");
    }
};

/// A map orbit theta_0 .. theta_N. When alpha > 4 the orbit may leave [0,1];
/// generation then stops at the first escaping value and `escaped` is set.
struct Orbit {
    std::vector<double> values;
    LogisticParams params;
    bool escaped = false;
};

inline Orbit logistic_orbit(const LogisticParams& params, int n_steps) {
    params.validate();
    if (n_steps < 1)
        throw std::domain_error("logistic_orbit: n_steps must be at least 1");
    Orbit orbit;
    orbit.params = params;
    orbit.values.reserve(static_cast<std::size_t>(n_steps) + 1);
    orbit.values.push_back(params.theta0);
    double theta = params.theta0;
    for (int i = 0; i < n_steps; ++i) {
        theta = logistic_step_unchecked(theta, params.alpha);
        orbit.values.push_back(theta);
        if (!(theta >= 0.0 && theta <= 1.0)) {
            orbit.escaped = true;
            break;
        }
    }
    return orbit;
}

/// Rescales the population form to the normalized map:
/// alpha = 1 + a*dt, theta0 = x0 / scale. The two recursions are identical
/// under theta = x / scale.
inline LogisticParams normalize_population(const PopulationParams& p) {
    p.validate();
    LogisticParams out;
    out.alpha = 1.0 + p.a * p.dt;
    out.theta0 = p.x0 / p.scale();
    if (!(out.theta0 < 1.0))
        throw std::domain_error("normalize_population: theta0 would reach or exceed 1");
    return out;
}

inline std::vector<double> denormalize(const std::vector<double>& thetas,
                                       const PopulationParams& p) {
    const double scale = p.scale();
    std::vector<double> xs;
    xs.reserve(thetas.size());
    for (double theta : thetas) xs.push_back(theta * scale);
    return xs;
}

/// Iterates the population difference form directly.
/// Throws if any x_n leaves the open interval (0, scale).
inline std::vector<double> population_orbit(const PopulationParams& p, int n_steps) {
    p.validate();
    if (n_steps < 1)
        throw std::domain_error("population_orbit: n_steps must be at least 1");
    const double scale = p.scale();
    std::vector<double> xs;
    xs.reserve(static_cast<std::size_t>(n_steps) + 1);
    xs.push_back(p.x0);
    double x = p.x0;
    for (int i = 0; i < n_steps; ++i) {
        x = x + p.a * p.dt * x * (1.0 - x / p.r);
        if (!(x > 0.0 && x < scale))
            throw std::domain_error("population_orbit: x_n left (0, r*(1+a*dt)/(a*dt))");
        xs.push_back(x);
    }
    return xs;
}

/// Fixed points of the map: {0} for alpha <= 1, {0, 1 - 1/alpha} above.
inline std::vector<double> fixed_points(double alpha) {
    if (!(alpha > 0.0))
        throw std::domain_error("fixed_points: alpha must be positive");
    if (alpha <= 1.0) return {0.0};
    return {0.0, 1.0 - 1.0 / alpha};
}

} // namespace chaosim
