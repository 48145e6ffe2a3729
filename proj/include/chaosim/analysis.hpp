#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "chaosim/logistic.hpp"

namespace chaosim {

enum class Regime { convergent, periodic, chaotic, escaped, undetermined };

inline const char* regime_name(Regime r) {
    switch (r) {
        case Regime::convergent: return "convergent";
        case Regime::periodic: return "periodic";
        case Regime::chaotic: return "chaotic";
        case Regime::escaped: return "escaped";
        case Regime::undetermined: return "undetermined";
    }
    return "?";
}

// Exponent above which a windowed orbit is called chaotic. Finite-sample
// exponents hover near zero at bifurcation points, hence the dead band: a
// non-periodic orbit with |lyapunov| <= this is reported undetermined.
inline constexpr double kChaosLyapunovThreshold = 0.01;

// Floor for log-summands: derivative hits on theta = 1/2 are measure-zero
// but floating point can land there.
inline const double kLogSummandFloor = std::log(1e-300);

struct RegimeReport {
    Regime classification = Regime::undetermined;
    int period = 0; // set iff periodic, then >= 2
    std::vector<double> attractor_values;
    double lyapunov = std::numeric_limits<double>::quiet_NaN();
    int transient_used = 0;
    int samples_used = 0;
};

namespace detail {

inline double lyapunov_summand(double theta, double alpha) {
    const double derivative = std::abs(alpha * (1.0 - 2.0 * theta));
    return derivative > 1e-300 ? std::log(derivative) : kLogSummandFloor;
}

inline double windowed_lyapunov(const std::vector<double>& window, double alpha) {
    double sum = 0.0;
    for (double theta : window) sum += lyapunov_summand(theta, alpha);
    return sum / static_cast<double>(window.size());
}

} // namespace detail

/// Classifies the orbit of (alpha, theta0): iterates `transient` steps, then
/// inspects `window` successive values. Checks run in order: escaped (value
/// left [0,1]), convergent (successive values within tol), periodic (minimal
/// period p <= window/2 with values repeating within tol), chaotic (windowed
/// exponent above the threshold), otherwise undetermined.
inline RegimeReport detect_regime(double alpha, double theta0, int transient, int window,
                                  double tol) {
    if (!(alpha > 0.0))
        throw std::domain_error("detect_regime: alpha must be positive");
    if (!(theta0 > 0.0 && theta0 < 1.0))
        throw std::domain_error("detect_regime: theta0 must lie in (0,1)");
    if (transient < 0)
        throw std::domain_error("detect_regime: transient must be non-negative");
    if (window < 16)
        throw std::domain_error("detect_regime: window must be at least 16");
    if (!(tol > 0.0 && tol < 1e-3))
        throw std::domain_error("detect_regime: tol must lie in (0, 1e-3)");

    RegimeReport report;
    report.transient_used = transient;

    double theta = theta0;
    for (int i = 0; i < transient; ++i) {
        theta = logistic_step_unchecked(theta, alpha);
        if (!(theta >= 0.0 && theta <= 1.0)) {
            report.classification = Regime::escaped;
            report.transient_used = i + 1;
            return report;
        }
    }

    std::vector<double> w;
    w.reserve(static_cast<std::size_t>(window));
    for (int i = 0; i < window; ++i) {
        w.push_back(theta);
        theta = logistic_step_unchecked(theta, alpha);
        if (!(theta >= 0.0 && theta <= 1.0)) {
            report.classification = Regime::escaped;
            report.samples_used = i + 1;
            return report;
        }
    }
    report.samples_used = window;
    report.lyapunov = detail::windowed_lyapunov(w, alpha);

    bool convergent = true;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
        if (std::abs(w[i + 1] - w[i]) >= tol) {
            convergent = false;
            break;
        }
    }
    if (convergent) {
        report.classification = Regime::convergent;
        report.attractor_values = {w.back()};
        return report;
    }

    for (int p = 2; p <= window / 2; ++p) {
        bool repeats = true;
        for (int i = 0; i + p < window; ++i) {
            if (std::abs(w[static_cast<std::size_t>(i + p)] - w[static_cast<std::size_t>(i)]) >=
                tol) {
                repeats = false;
                break;
            }
        }
        if (repeats) {
            report.classification = Regime::periodic;
            report.period = p;
            report.attractor_values.assign(w.end() - p, w.end());
            std::sort(report.attractor_values.begin(), report.attractor_values.end());
            return report;
        }
    }

    report.classification =
        report.lyapunov > kChaosLyapunovThreshold ? Regime::chaotic : Regime::undetermined;
    return report;
}

/// Mean of ln|alpha*(1 - 2*theta_k)| over n post-transient steps.
/// Throws if the orbit leaves [0,1].
inline double lyapunov_exponent(double alpha, double theta0, long long n, int transient) {
    if (!(alpha > 0.0))
        throw std::domain_error("lyapunov_exponent: alpha must be positive");
    if (!(theta0 > 0.0 && theta0 < 1.0))
        throw std::domain_error("lyapunov_exponent: theta0 must lie in (0,1)");
    if (n < 10000)
        throw std::domain_error("lyapunov_exponent: n must be at least 10^4");
    if (transient < 0)
        throw std::domain_error("lyapunov_exponent: transient must be non-negative");

    double theta = theta0;
    for (int i = 0; i < transient; ++i) {
        theta = logistic_step_unchecked(theta, alpha);
        if (!(theta >= 0.0 && theta <= 1.0))
            throw std::domain_error("lyapunov_exponent: orbit escaped [0,1]");
    }
    double sum = 0.0;
    for (long long i = 0; i < n; ++i) {
        sum += detail::lyapunov_summand(theta, alpha);
        theta = logistic_step_unchecked(theta, alpha);
        if (!(theta >= 0.0 && theta <= 1.0))
            throw std::domain_error("lyapunov_exponent: orbit escaped [0,1]");
    }
    return sum / static_cast<double>(n);
}

struct BifurcationRow {
    double alpha = 0.0;
    std::vector<double> values;
};

struct BifurcationTable {
    std::vector<BifurcationRow> rows;
};

/// Samples the attractor across an alpha grid: for each alpha, iterates
/// `transient` steps from theta0 and records `keep` successive values. Rows
/// are computed independently (optionally on `threads` workers) and always
/// assembled in ascending alpha order; the result does not depend on
/// scheduling.
inline BifurcationTable bifurcation_scan(double alpha_min, double alpha_max, double alpha_step,
                                         double theta0 = 0.2, int transient = 2000, int keep = 64,
                                         int threads = 0) {
    if (!(alpha_min > 0.0 && alpha_min < alpha_max && alpha_max <= 4.0))
        throw std::domain_error("bifurcation_scan: need 0 < alpha_min < alpha_max <= 4");
    if (!(alpha_step > 0.0))
        throw std::domain_error("bifurcation_scan: alpha_step must be positive");
    if (!(theta0 > 0.0 && theta0 < 1.0))
        throw std::domain_error("bifurcation_scan: theta0 must lie in (0,1)");
    if (transient < 0)
        throw std::domain_error("bifurcation_scan: transient must be non-negative");
    if (keep < 1)
        throw std::domain_error("bifurcation_scan: keep must be at least 1");

    const long long n_rows =
        static_cast<long long>(std::floor((alpha_max - alpha_min) / alpha_step + 1e-9)) + 1;
    BifurcationTable table;
    table.rows.resize(static_cast<std::size_t>(n_rows));

    auto compute_row = [&](long long k) {
        BifurcationRow& row = table.rows[static_cast<std::size_t>(k)];
        row.alpha = alpha_min + static_cast<double>(k) * alpha_step;
        row.values.reserve(static_cast<std::size_t>(keep));
        double theta = theta0;
        for (int i = 0; i < transient; ++i) theta = logistic_step_unchecked(theta, row.alpha);
        for (int i = 0; i < keep; ++i) {
            row.values.push_back(theta);
            theta = logistic_step_unchecked(theta, row.alpha);
        }
    };

    int n_workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    n_workers = std::clamp(n_workers, 1, 64);
    if (n_workers == 1 || n_rows < 2) {
        for (long long k = 0; k < n_rows; ++k) compute_row(k);
    } else {
        std::atomic<long long> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_workers));
        for (int t = 0; t < n_workers; ++t) {
            pool.emplace_back([&] {
                for (long long k = next.fetch_add(1); k < n_rows; k = next.fetch_add(1))
                    compute_row(k);
            });
        }
        for (auto& worker : pool) worker.join();
    }
    return table;
}

struct LadderRung {
    double alpha = 0.0;
    Regime expected = Regime::undetermined;
    int expected_period = 0; // 0 when not applicable
    RegimeReport report;
    bool pass = false;
    std::string detail;
};

struct LadderResult {
    std::vector<LadderRung> rungs;
    bool all_pass = false;
};

namespace detail {

// Seeds whose orbit collapses onto 0 or sits on the unstable fixed point
// are measure-zero and say nothing about the attractor.
inline bool degenerate_seed(double theta0, double alpha) {
    if (!(theta0 > 0.0 && theta0 < 1.0)) return true;
    if (alpha > 1.0 && std::abs(theta0 - (1.0 - 1.0 / alpha)) < 1e-12) return true;
    if (alpha == 4.0 && std::abs(theta0 - 0.5) < 1e-12) return true; // maps to 1 then 0
    return false;
}

} // namespace detail

/// Runs detect_regime across the canonical parameter ladder
/// {2.5, 3.2, 3.5, 3.55, 3.9, 4.0} and checks the expected sequence:
/// convergent, period-2, period-4, period-8, chaotic, chaotic. Where the
/// attractor has a closed form (the fixed point and the 2-cycle) the values
/// are checked too. Degenerate seeds are replaced by the generic 0.2 for
/// the affected rung, noted in the rung detail.
inline LadderResult regime_ladder_check(double theta0 = 0.2) {
    struct RungSpec {
        double alpha;
        Regime expected;
        int period;
    };
    const RungSpec specs[] = {
        {2.5, Regime::convergent, 0}, {3.2, Regime::periodic, 2}, {3.5, Regime::periodic, 4},
        {3.55, Regime::periodic, 8},  {3.9, Regime::chaotic, 0},  {4.0, Regime::chaotic, 0},
    };
    constexpr int kTransient = 2000;
    constexpr int kWindow = 4096;
    constexpr double kTol = 1e-4;

    LadderResult result;
    result.all_pass = true;
    for (const RungSpec& spec : specs) {
        LadderRung rung;
        rung.alpha = spec.alpha;
        rung.expected = spec.expected;
        rung.expected_period = spec.period;

        double seed = theta0;
        if (detail::degenerate_seed(theta0, spec.alpha)) {
            seed = 0.2;
            rung.detail = "degenerate seed replaced by 0.2";
        }
        rung.report = detect_regime(spec.alpha, seed, kTransient, kWindow, kTol);

        rung.pass = rung.report.classification == spec.expected;
        if (rung.pass && spec.expected == Regime::periodic)
            rung.pass = rung.report.period == spec.period;
        if (rung.pass && spec.expected == Regime::convergent) {
            const double fixed_point = 1.0 - 1.0 / spec.alpha;
            rung.pass = std::abs(rung.report.attractor_values.at(0) - fixed_point) <= 1e-6;
        }
        if (rung.pass && spec.expected == Regime::periodic && spec.period == 2) {
            // closed-form 2-cycle: roots of the once-iterated map
            const double s = std::sqrt((spec.alpha - 3.0) * (spec.alpha + 1.0));
            const double lo = (spec.alpha + 1.0 - s) / (2.0 * spec.alpha);
            const double hi = (spec.alpha + 1.0 + s) / (2.0 * spec.alpha);
            rung.pass = std::abs(rung.report.attractor_values.at(0) - lo) <= 1e-4 &&
                        std::abs(rung.report.attractor_values.at(1) - hi) <= 1e-4;
        }
        result.all_pass = result.all_pass && rung.pass;
        result.rungs.push_back(std::move(rung));
    }
    return result;
}

} // namespace chaosim
