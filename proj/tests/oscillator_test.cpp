#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "chaosim/logistic.hpp"
#include "chaosim/oscillator.hpp"

namespace {

using namespace chaosim;
constexpr double kPi = std::numbers::pi;

std::vector<OscillatorConfig> random_configs(int count, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> log_xv(std::log(0.5), std::log(5.0));
    std::uniform_real_distribution<double> log_w(std::log(0.5), std::log(2.0));
    std::vector<OscillatorConfig> configs;
    configs.reserve(count);
    for (int i = 0; i < count; ++i)
        configs.push_back({std::exp(log_xv(rng)), std::exp(log_xv(rng)), std::exp(log_w(rng))});
    return configs;
}

TEST(Scales, DirectEvaluation) {
    const OscillatorScales unit = scales({1.0, 1.0, 1.0});
    EXPECT_NEAR(unit.beta, 2.0, 1e-15);
    EXPECT_NEAR(unit.t_star, 2.0, 1e-15);

    // chosen so omega*tau stays at or below 0.01 across the whole unit interval
    const OscillatorScales slow = scales({78000.0, 390.0, 1.0});
    EXPECT_NEAR(slow.beta, 3.9, 1e-14);
    EXPECT_NEAR(slow.t_star, 0.01, 1e-16);
}

TEST(Scales, BetaOverTStarIsV0) {
    for (const OscillatorConfig& c : random_configs(200, 101)) {
        const OscillatorScales s = scales(c);
        EXPECT_NEAR(s.beta / s.t_star, c.v0, 1e-14 * c.v0);
    }
}

TEST(Scales, RejectsInvalidConfig) {
    EXPECT_THROW(scales({0.0, 1.0, 1.0}), std::domain_error);
    EXPECT_THROW(scales({1.0, -1.0, 1.0}), std::domain_error);
    EXPECT_THROW(scales({1.0, 1.0, 0.0}), std::domain_error);
}

TEST(ExactPosition, DirectEvaluation) {
    EXPECT_EQ(exact_position({1.0, 1.0, 1.0}, 0.0), 1.0);
    // cos(pi/2) = 0, sin(pi/2) = 1 -> value is v0/omega
    EXPECT_NEAR(exact_position({1.0, 1.0, 1.0}, kPi / 2.0), 1.0, 1e-12);
    // full period return
    EXPECT_NEAR(exact_position({2.0, 1.0, 2.0}, kPi), 2.0, 1e-12);
}

TEST(ExactPosition, PeriodicOverOnePeriod) {
    for (const OscillatorConfig& c : random_configs(100, 202)) {
        const double period = 2.0 * kPi / c.omega;
        EXPECT_NEAR(exact_position(c, period), c.x0, 1e-10 * c.x0);
    }
}

TEST(ExactPosition, EnergyIsConserved) {
    for (const OscillatorConfig& c : random_configs(100, 303)) {
        const double energy0 = 0.5 * c.v0 * c.v0 + 0.5 * c.omega * c.omega * c.x0 * c.x0;
        for (int i = 0; i <= 100; ++i) {
            const double t = (2.0 * kPi / c.omega) * i / 100.0;
            const double x = exact_position(c, t);
            const double v = exact_velocity(c, t);
            const double energy = 0.5 * v * v + 0.5 * c.omega * c.omega * x * x;
            EXPECT_NEAR(energy, energy0, 1e-12 * energy0);
        }
    }
}

TEST(ExactVelocity, MatchesCentralDifference) {
    for (const OscillatorConfig& c : random_configs(50, 404)) {
        const double amplitude = c.x0 + c.v0 / c.omega;
        std::mt19937 rng(505);
        std::uniform_real_distribution<double> t_dist(0.0, 2.0 * kPi / c.omega);
        for (int i = 0; i < 10; ++i) {
            const double t = t_dist(rng);
            const double h = 1e-6 / c.omega;
            const double fd = (exact_position(c, t + h) - exact_position(c, t - h)) / (2.0 * h);
            EXPECT_NEAR(fd, exact_velocity(c, t), 1e-7 * amplitude * c.omega);
        }
    }
}

TEST(ExactVelocity, CentralDifferenceIsSecondOrder) {
    // at steps where truncation dominates rounding, halving h quarters the error
    const OscillatorConfig c{1.3, 0.7, 1.1};
    const double t = 0.8;
    auto fd_error = [&](double h) {
        const double fd = (exact_position(c, t + h) - exact_position(c, t - h)) / (2.0 * h);
        return std::abs(fd - exact_velocity(c, t));
    };
    const double ratio = fd_error(2e-3 / c.omega) / fd_error(1e-3 / c.omega);
    EXPECT_GT(ratio, 3.5);
    EXPECT_LT(ratio, 4.5);
}

TEST(TaylorPosition, DirectEvaluation) {
    EXPECT_EQ(taylor_position({5.0, 1.0, 3.0}, 0.0), 5.0);
    // 1 + 0.01 - 0.5*1*1*0.0001
    EXPECT_NEAR(taylor_position({1.0, 1.0, 1.0}, 0.01), 1.00995, 1e-15);
}

TEST(TaylorErrorBound, DirectEvaluation) {
    EXPECT_EQ(taylor_error_bound({1.0, 1.0, 1.0}, 0.0), 0.0);
    // 1e-4/24 + 1e-3/6
    EXPECT_NEAR(taylor_error_bound({1.0, 1.0, 1.0}, 0.1), 1.7083333333333333e-4, 1e-18);
}

TEST(TaylorErrorBound, DominatesTrueErrorOnGrid) {
    for (const OscillatorConfig& c : random_configs(25, 606)) {
        for (int i = 0; i < 1000; ++i) {
            const double t = (0.5 * i / 999.0) / c.omega; // omega*t in [0, 0.5]
            const double gap = std::abs(exact_position(c, t) - taylor_position(c, t));
            EXPECT_LE(gap, taylor_error_bound(c, t)) << "omega*t=" << c.omega * t;
        }
    }
}

TEST(TaylorErrorBound, CoversExampleAtSmallTime) {
    const OscillatorConfig c{1.0, 1.0, 1.0};
    const double gap = std::abs(exact_position(c, 0.01) - taylor_position(c, 0.01));
    EXPECT_LE(gap, taylor_error_bound(c, 0.01));
}

TEST(Displacement, AgreesWithPositionMinusX0) {
    for (const OscillatorConfig& c : random_configs(50, 707)) {
        for (double wt : {1e-4, 1e-2, 0.3, 1.0, 2.5}) {
            const double t = wt / c.omega;
            EXPECT_NEAR(exact_displacement(c, t), exact_position(c, t) - c.x0, 1e-13 * c.x0);
            EXPECT_NEAR(taylor_displacement(c, t), taylor_position(c, t) - c.x0, 1e-13 * c.x0);
        }
    }
}

TEST(RestartSchedule, DirectEvaluation) {
    // beta = 2, t_star = 2; tau1 = 0.4 -> eps1 = 0.2
    const RestartSchedule s = restart_schedule({1.0, 1.0, 1.0}, 0.4, 3, PositionMode::taylor);
    ASSERT_EQ(s.entries.size(), 3u);
    EXPECT_NEAR(s.entries[0].eps, 0.2, 1e-15);
    EXPECT_NEAR(s.entries[1].eps, 0.32, 1e-15);   // 2*0.2*0.8
    EXPECT_NEAR(s.entries[1].tau, 0.64, 1e-15);
    EXPECT_NEAR(s.entries[2].eps, 0.4352, 1e-15); // 2*0.32*0.68
}

TEST(RestartSchedule, TauIsEpsTimesScale) {
    const RestartSchedule s = restart_schedule({2.0, 3.0, 1.5}, 0.1, 500, PositionMode::taylor);
    for (const RestartEntry& e : s.entries) {
        EXPECT_EQ(e.tau, e.eps * s.scales.t_star);
        EXPECT_EQ(e.omega_tau, s.config.omega * e.tau);
    }
}

TEST(RestartSchedule, TaylorDisplacementEqualsMapIncrement) {
    // the algebraic identity v0*tau - x0*w^2*tau^2/2 == beta*eps*(1-eps)
    std::mt19937 rng(808);
    std::uniform_real_distribution<double> beta_dist(0.5, 3.99);
    std::uniform_real_distribution<double> eps_dist(0.01, 0.99);
    std::uniform_real_distribution<double> x0_dist(0.5, 100.0);
    for (int i = 0; i < 100; ++i) {
        const double beta = beta_dist(rng);
        const double x0 = x0_dist(rng);
        // v0 = sqrt(beta*x0/2) at omega = 1
        const OscillatorConfig c{x0, std::sqrt(beta * x0 / 2.0), 1.0};
        const OscillatorScales s = scales(c);
        const RestartSchedule schedule =
            restart_schedule(c, eps_dist(rng) * s.t_star, 500, PositionMode::taylor);
        ASSERT_FALSE(schedule.escaped());
        for (const RestartEntry& e : schedule.entries) {
            const double increment = s.beta * e.eps * (1.0 - e.eps);
            const double denom = std::max(std::abs(increment), std::abs(e.delta_x));
            if (denom == 0.0) continue;
            EXPECT_NEAR(e.delta_x, increment, 1e-12 * denom);
        }
    }
}

TEST(RestartSchedule, FlagsTaylorSuspectBeyondThreshold) {
    // beta = 2, t_star = 2: eps ~ 0.2..0.5 means omega*tau ~ 0.4..1.0
    const RestartSchedule s = restart_schedule({1.0, 1.0, 1.0}, 0.4, 20, PositionMode::taylor);
    for (const RestartEntry& e : s.entries) EXPECT_TRUE(e.flags & kFlagTaylorSuspect);

    const RestartSchedule slow = restart_schedule({78000.0, 390.0, 1.0}, 0.002, 10000,
                                                  PositionMode::taylor);
    for (const RestartEntry& e : slow.entries) EXPECT_EQ(e.flags, kFlagNone);
}

TEST(RestartSchedule, EscapesAboveFourWithinTwoSteps) {
    // beta = 4.5, t_star = 3, tau1 = 1.5 -> eps1 = 0.5, eps2 = 1.125
    const RestartSchedule s = restart_schedule({1.0, 1.5, 1.0}, 1.5, 10, PositionMode::taylor);
    ASSERT_EQ(s.entries.size(), 2u);
    EXPECT_NEAR(s.entries[1].eps, 1.125, 1e-15);
    EXPECT_TRUE(s.entries[1].flags & kFlagEpsOutOfRange);
    EXPECT_TRUE(s.entries[1].flags & kFlagEscaped);
    EXPECT_TRUE(s.escaped());
}

TEST(RestartSchedule, NeverEscapesAtOrBelowFour) {
    std::mt19937 rng(909);
    std::uniform_real_distribution<double> beta_dist(0.1, 4.0);
    std::uniform_real_distribution<double> eps_dist(0.001, 0.999);
    for (int i = 0; i < 200; ++i) {
        const double beta = beta_dist(rng);
        const OscillatorConfig c{1.0, std::sqrt(beta / 2.0), 1.0};
        const RestartSchedule s =
            restart_schedule(c, eps_dist(rng) * scales(c).t_star, 1000, PositionMode::taylor);
        EXPECT_FALSE(s.escaped()) << "beta=" << beta;
        EXPECT_EQ(s.entries.size(), 1000u);
    }
}

TEST(RestartSchedule, OutOfRangeSeedIsFlaggedThenEscapes) {
    // beta = 2 <= 4, eps1 = 1.5: flagged but not escaped; eps2 < 0 escapes
    const RestartSchedule s = restart_schedule({1.0, 1.0, 1.0}, 3.0, 10, PositionMode::taylor);
    ASSERT_EQ(s.entries.size(), 2u);
    EXPECT_EQ(s.entries[0].flags & kFlagEpsOutOfRange, kFlagEpsOutOfRange);
    EXPECT_FALSE(s.entries[0].flags & kFlagEscaped);
    EXPECT_LT(s.entries[1].eps, 0.0);
    EXPECT_TRUE(s.entries[1].flags & kFlagEscaped);
}

TEST(RestartSchedule, RejectsInvalidArguments) {
    EXPECT_THROW(restart_schedule({1.0, 1.0, 1.0}, 0.0, 10, PositionMode::taylor),
                 std::domain_error);
    EXPECT_THROW(restart_schedule({1.0, 1.0, 1.0}, -0.1, 10, PositionMode::taylor),
                 std::domain_error);
    EXPECT_THROW(restart_schedule({1.0, 1.0, 1.0}, 0.4, 0, PositionMode::taylor),
                 std::domain_error);
}

TEST(CompareToLogistic, ResidualsStayBelowTolerance) {
    for (double beta : {2.8, 3.9}) {
        const OscillatorConfig c{1.0, std::sqrt(beta / 2.0), 1.0};
        const double t_star = scales(c).t_star;
        const auto residuals = compare_to_logistic(c, 0.2 * t_star, 1000);
        ASSERT_EQ(residuals.size(), 1000u);
        for (const StepResidual& r : residuals) {
            EXPECT_LT(r.eps_residual, 1e-12) << "beta=" << beta << " n=" << r.n;
            EXPECT_LT(r.delta_x_residual, 1e-12) << "beta=" << beta << " n=" << r.n;
        }
    }
}

TEST(CompareToLogistic, ExactModeStaysWithinTaylorBound) {
    // omega*tau <= 0.01 for every step of this configuration
    const OscillatorConfig c{78000.0, 390.0, 1.0};
    const RestartSchedule s = restart_schedule(c, 0.002, 2000, PositionMode::exact);
    const auto residuals = compare_to_logistic(c, 0.002, 2000, PositionMode::exact);
    ASSERT_EQ(residuals.size(), s.entries.size());
    for (std::size_t i = 0; i < residuals.size(); ++i) {
        EXPECT_LE(s.entries[i].omega_tau, 0.01);
        EXPECT_LE(residuals[i].delta_x_residual, s.entries[i].taylor_error_bound);
    }
}

TEST(CompareToLogistic, CrossModuleOrbitIsStepForStep) {
    const OscillatorConfig c{78000.0, 390.0, 1.0};
    const RestartSchedule s = restart_schedule(c, 0.002, 10000, PositionMode::taylor);
    ASSERT_EQ(s.entries.size(), 10000u);
    const Orbit orbit = logistic_orbit({s.scales.beta, s.entries[0].eps}, 9999);
    for (std::size_t i = 0; i < s.entries.size(); ++i) {
        EXPECT_LT(std::abs(s.entries[i].eps - orbit.values[i]), 1e-12) << "n=" << i + 1;
    }
}

} // namespace
