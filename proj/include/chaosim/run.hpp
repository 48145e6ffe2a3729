#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "chaosim/analysis.hpp"
#include "chaosim/csv.hpp"
#include "chaosim/flags.hpp"
#include "chaosim/logistic.hpp"
#include "chaosim/oscillator.hpp"
#include "chaosim/quantum.hpp"
#include "chaosim/svg.hpp"
#include "chaosim/table.hpp"

namespace chaosim {

enum class Command { logistic, oscillator, quantum, bifurcate, lyapunov, ladder, compare };

inline const char* command_name(Command c) {
    switch (c) {
        case Command::logistic: return "logistic";
        case Command::oscillator: return "oscillator";
        case Command::quantum: return "quantum";
        case Command::bifurcate: return "bifurcate";
        case Command::lyapunov: return "lyapunov";
        case Command::ladder: return "ladder";
        case Command::compare: return "compare";
    }
    return "?";
}

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --help goes through here so callers decide the stream; carries the text.
struct HelpRequested : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitStrictViolation = 2;
inline constexpr int kExitIo = 3;

/// A fully validated run request. `params` mirrors the command's flag names.
struct RunConfig {
    Command command = Command::logistic;
    nlohmann::json params = nlohmann::json::object();
    std::string out_path;
    std::string svg_path;
    bool strict = false;
};

struct RunRecord {
    RunConfig config_echo;
    std::vector<std::string> produced_files;
    std::map<std::string, long long> flags_summary;
    int exit_code = kExitOk;
};

namespace cli_detail {

struct OptionSpec {
    const char* key;
    enum Kind { kReal, kInt, kString } kind;
    bool required;
    const char* help;
};

inline const std::vector<OptionSpec>& options_for(Command cmd) {
    static const std::vector<OptionSpec> logistic = {
        {"alpha", OptionSpec::kReal, true, "growth parameter, > 0"},
        {"theta0", OptionSpec::kReal, true, "initial value in [0,1]"},
        {"steps", OptionSpec::kInt, true, "number of map steps, >= 1"},
        {"out", OptionSpec::kString, true, "output CSV path"},
        {"svg", OptionSpec::kString, false, "optional SVG scatter path"},
    };
    static const std::vector<OptionSpec> oscillator = {
        {"x0", OptionSpec::kReal, true, "initial coordinate, > 0"},
        {"v0", OptionSpec::kReal, true, "initial speed, > 0"},
        {"omega", OptionSpec::kReal, true, "circular frequency, > 0"},
        {"tau1", OptionSpec::kReal, true, "first restart moment, > 0"},
        {"steps", OptionSpec::kInt, true, "number of restarts, >= 1"},
        {"mode", OptionSpec::kString, false, "displacement law: taylor|exact (default taylor)"},
        {"out", OptionSpec::kString, true, "output CSV path"},
    };
    static const std::vector<OptionSpec> quantum = {
        {"a", OptionSpec::kReal, true, "detection amplitude on |1>; b = sqrt(1-a^2)"},
        {"omega", OptionSpec::kReal, true, "circular frequency, > 0"},
        {"tau1", OptionSpec::kReal, true, "first measurement moment, > 0"},
        {"steps", OptionSpec::kInt, true, "number of measurements, >= 1"},
        {"gamma-convention", OptionSpec::kString, false,
         "dimensionless|paper-literal (default dimensionless)"},
        {"out", OptionSpec::kString, true, "output CSV path"},
    };
    static const std::vector<OptionSpec> bifurcate = {
        {"alpha-min", OptionSpec::kReal, true, "grid start, > 0"},
        {"alpha-max", OptionSpec::kReal, true, "grid end, <= 4"},
        {"alpha-step", OptionSpec::kReal, true, "grid spacing, > 0"},
        {"theta0", OptionSpec::kReal, false, "seed in (0,1), default 0.2"},
        {"transient", OptionSpec::kInt, false, "discarded steps per row, default 2000"},
        {"keep", OptionSpec::kInt, false, "recorded values per row, default 64"},
        {"out", OptionSpec::kString, true, "output CSV path"},
        {"svg", OptionSpec::kString, false, "optional SVG scatter path"},
    };
    static const std::vector<OptionSpec> lyapunov = {
        {"alpha", OptionSpec::kReal, true, "growth parameter, > 0"},
        {"theta0", OptionSpec::kReal, false, "seed in (0,1), default 0.2"},
        {"steps", OptionSpec::kInt, false, "averaged steps, >= 10^4, default 10^6"},
        {"transient", OptionSpec::kInt, false, "discarded steps, default 1000"},
    };
    static const std::vector<OptionSpec> ladder = {
        {"theta0", OptionSpec::kReal, false, "seed, default 0.2; degenerate seeds replaced"},
    };
    static const std::vector<OptionSpec> compare = {
        {"x0", OptionSpec::kReal, true, "initial coordinate, > 0"},
        {"v0", OptionSpec::kReal, true, "initial speed, > 0"},
        {"omega", OptionSpec::kReal, true, "circular frequency, > 0"},
        {"tau1", OptionSpec::kReal, true, "first restart moment, > 0"},
        {"steps", OptionSpec::kInt, true, "number of steps, >= 1"},
        {"out", OptionSpec::kString, false, "optional per-step residual CSV path"},
    };
    switch (cmd) {
        case Command::logistic: return logistic;
        case Command::oscillator: return oscillator;
        case Command::quantum: return quantum;
        case Command::bifurcate: return bifurcate;
        case Command::lyapunov: return lyapunov;
        case Command::ladder: return ladder;
        case Command::compare: return compare;
    }
    return logistic;
}

inline double require_real(const nlohmann::json& params, const char* key) {
    return params.at(key).get<double>();
}

inline long long require_int(const nlohmann::json& params, const char* key) {
    return params.at(key).get<long long>();
}

inline void check(bool ok, const std::string& message) {
    if (!ok) throw UsageError(message);
}

inline void validate_params(Command cmd, const nlohmann::json& p) {
    auto real_or = [&p](const char* key, double fallback) {
        return p.contains(key) ? p.at(key).get<double>() : fallback;
    };
    auto int_or = [&p](const char* key, long long fallback) {
        return p.contains(key) ? p.at(key).get<long long>() : fallback;
    };
    switch (cmd) {
        case Command::logistic: {
            check(require_real(p, "alpha") > 0.0, "--alpha must be positive");
            const double theta0 = require_real(p, "theta0");
            check(theta0 >= 0.0 && theta0 <= 1.0, "--theta0 must lie in [0,1]");
            check(require_int(p, "steps") >= 1, "--steps must be at least 1");
            break;
        }
        case Command::oscillator:
        case Command::compare: {
            check(require_real(p, "x0") > 0.0, "--x0 must be positive");
            check(require_real(p, "v0") > 0.0, "--v0 must be positive");
            check(require_real(p, "omega") > 0.0, "--omega must be positive");
            check(require_real(p, "tau1") > 0.0, "--tau1 must be positive");
            check(require_int(p, "steps") >= 1, "--steps must be at least 1");
            if (cmd == Command::oscillator) {
                const std::string mode = p.value("mode", "taylor");
                check(mode == "taylor" || mode == "exact", "--mode must be taylor or exact");
            }
            break;
        }
        case Command::quantum: {
            const double a = require_real(p, "a");
            check(a > std::sqrt(0.5) && a < 1.0,
                  "--a must lie in (sqrt(1/2), 1) so that a > b > 0");
            check(require_real(p, "omega") > 0.0, "--omega must be positive");
            check(require_real(p, "tau1") > 0.0, "--tau1 must be positive");
            check(require_int(p, "steps") >= 1, "--steps must be at least 1");
            const std::string conv = p.value("gamma-convention", "dimensionless");
            check(conv == "dimensionless" || conv == "paper-literal",
                  "--gamma-convention must be dimensionless or paper-literal");
            break;
        }
        case Command::bifurcate: {
            const double lo = require_real(p, "alpha-min");
            const double hi = require_real(p, "alpha-max");
            check(lo > 0.0, "--alpha-min must be positive");
            check(hi > lo, "--alpha-max must exceed --alpha-min");
            check(hi <= 4.0, "--alpha-max must not exceed 4");
            check(require_real(p, "alpha-step") > 0.0, "--alpha-step must be positive");
            const double theta0 = real_or("theta0", 0.2);
            check(theta0 > 0.0 && theta0 < 1.0, "--theta0 must lie in (0,1)");
            check(int_or("transient", 2000) >= 0, "--transient must be non-negative");
            check(int_or("keep", 64) >= 1, "--keep must be at least 1");
            break;
        }
        case Command::lyapunov: {
            check(require_real(p, "alpha") > 0.0, "--alpha must be positive");
            const double theta0 = real_or("theta0", 0.2);
            check(theta0 > 0.0 && theta0 < 1.0, "--theta0 must lie in (0,1)");
            check(int_or("steps", 1000000) >= 10000, "--steps must be at least 10000");
            check(int_or("transient", 1000) >= 0, "--transient must be non-negative");
            break;
        }
        case Command::ladder:
            break;
    }
}

} // namespace cli_detail

/// Parses command-line arguments (program name excluded). `--config PATH`
/// loads a JSON object with the same keys as the flags; explicit flags
/// override file values. Throws UsageError with the offending flag named.
inline RunConfig parse_args(std::vector<std::string> args) {
    using cli_detail::OptionSpec;

    CLI::App app{"logistic-map dynamics from restarted linear systems"};
    app.fallthrough();
    std::string config_path;
    bool strict = false;
    CLI::Option* config_opt = app.add_option("--config", config_path, "JSON run configuration");
    CLI::Option* strict_opt =
        app.add_flag("--strict", strict, "exit 2 when any validity flag is raised");

    const Command commands[] = {Command::logistic,  Command::oscillator, Command::quantum,
                                Command::bifurcate, Command::lyapunov,   Command::ladder,
                                Command::compare};
    std::map<Command, CLI::App*> apps;
    std::map<Command, nlohmann::json> given;
    for (Command cmd : commands) {
        CLI::App* sub = app.add_subcommand(command_name(cmd), "");
        apps[cmd] = sub;
        given[cmd] = nlohmann::json::object();
        nlohmann::json* sink = &given[cmd];
        for (const OptionSpec& spec : cli_detail::options_for(cmd)) {
            const std::string flag = std::string("--") + spec.key;
            const std::string key = spec.key;
            switch (spec.kind) {
                case OptionSpec::kReal:
                    sub->add_option_function<double>(
                        flag, [sink, key](const double& v) { (*sink)[key] = v; }, spec.help);
                    break;
                case OptionSpec::kInt:
                    sub->add_option_function<long long>(
                        flag, [sink, key](const long long& v) { (*sink)[key] = v; }, spec.help);
                    break;
                case OptionSpec::kString:
                    sub->add_option_function<std::string>(
                        flag, [sink, key](const std::string& v) { (*sink)[key] = v; }, spec.help);
                    break;
            }
        }
    }

    std::reverse(args.begin(), args.end()); // CLI11 consumes back to front
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested(app.help());
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    Command cmd = Command::logistic;
    bool found = false;
    for (const auto& [candidate, sub] : apps) {
        if (sub->parsed()) {
            cmd = candidate;
            found = true;
            break;
        }
    }
    if (!found)
        throw UsageError("missing command: expected one of logistic, oscillator, quantum, "
                         "bifurcate, lyapunov, ladder, compare");

    nlohmann::json params = given[cmd];

    if (config_opt->count() > 0) {
        std::ifstream in(config_path);
        if (!in) throw UsageError("--config: cannot read " + config_path);
        nlohmann::json doc;
        try {
            in >> doc;
        } catch (const nlohmann::json::parse_error& e) {
            throw UsageError("--config: invalid JSON in " + config_path + ": " + e.what());
        }
        if (!doc.is_object()) throw UsageError("--config: document must be a JSON object");
        for (const auto& [key, value] : doc.items()) {
            if (key == "strict") {
                if (strict_opt->count() == 0) {
                    if (!value.is_boolean())
                        throw UsageError("--config: key 'strict' must be a boolean");
                    strict = value.get<bool>();
                }
                continue;
            }
            const OptionSpec* spec = nullptr;
            for (const OptionSpec& s : cli_detail::options_for(cmd))
                if (key == s.key) spec = &s;
            if (spec == nullptr)
                throw UsageError("--config: unknown key '" + key + "' for command '" +
                                 command_name(cmd) + "'");
            if (params.contains(key)) continue; // command line wins
            switch (spec->kind) {
                case OptionSpec::kReal:
                    if (!value.is_number())
                        throw UsageError("--config: key '" + key + "' must be a number");
                    params[key] = value.get<double>();
                    break;
                case OptionSpec::kInt: {
                    if (value.is_number_integer() || value.is_number_unsigned()) {
                        params[key] = value.get<long long>();
                    } else if (value.is_number_float() &&
                               value.get<double>() == std::floor(value.get<double>())) {
                        params[key] = static_cast<long long>(value.get<double>());
                    } else {
                        throw UsageError("--config: key '" + key + "' must be an integer");
                    }
                    break;
                }
                case OptionSpec::kString:
                    if (!value.is_string())
                        throw UsageError("--config: key '" + key + "' must be a string");
                    params[key] = value.get<std::string>();
                    break;
            }
        }
    }

    for (const OptionSpec& spec : cli_detail::options_for(cmd)) {
        if (spec.required && !params.contains(spec.key))
            throw UsageError(std::string("--") + spec.key + " is required for '" +
                             command_name(cmd) + "'");
    }

    cli_detail::validate_params(cmd, params);

    RunConfig config;
    config.command = cmd;
    config.strict = strict;
    if (params.contains("out")) {
        config.out_path = params.at("out").get<std::string>();
        params.erase("out");
    }
    if (params.contains("svg")) {
        config.svg_path = params.at("svg").get<std::string>();
        params.erase("svg");
    }
    config.params = std::move(params);
    return config;
}

namespace cli_detail {

inline void count_flags(std::map<std::string, long long>& summary, unsigned flags) {
    if (flags & kFlagTaylorSuspect) ++summary["TAYLOR_SUSPECT"];
    if (flags & kFlagEpsOutOfRange) ++summary["EPS_OUT_OF_RANGE"];
    if (flags & kFlagProbOutOfRange) ++summary["PROB_OUT_OF_RANGE"];
    if (flags & kFlagEscaped) ++summary["ESCAPED"];
}

inline void seed_flag_counters(std::map<std::string, long long>& summary,
                               std::initializer_list<const char*> names) {
    for (const char* name : names) summary[name] = 0;
}

inline void emit_outputs(const Table& table, const RunConfig& config, const std::string& x_column,
                         const std::string& y_column, RunRecord& record) {
    if (!config.out_path.empty()) {
        emit_csv(table, config.out_path);
        record.produced_files.push_back(config.out_path);
    }
    if (!config.svg_path.empty()) {
        emit_svg_scatter(table, x_column, y_column, config.svg_path);
        record.produced_files.push_back(config.svg_path);
    }
}

inline void run_logistic(const RunConfig& config, std::ostream& out, RunRecord& record) {
    LogisticParams params{require_real(config.params, "alpha"),
                          require_real(config.params, "theta0")};
    const int steps = static_cast<int>(require_int(config.params, "steps"));
    const Orbit orbit = logistic_orbit(params, steps);

    seed_flag_counters(record.flags_summary, {"ESCAPED"});
    Table table({"n", "theta"});
    for (std::size_t i = 0; i < orbit.values.size(); ++i)
        table.add_row({static_cast<long long>(i), orbit.values[i]});
    if (orbit.escaped) ++record.flags_summary["ESCAPED"];
    emit_outputs(table, config, "n", "theta", record);
    out << "rows=" << orbit.values.size() << "\n";
    out << "escaped=" << (orbit.escaped ? "true" : "false") << "\n";
}

inline void run_oscillator(const RunConfig& config, std::ostream& out, RunRecord& record) {
    const OscillatorConfig c{require_real(config.params, "x0"),
                             require_real(config.params, "v0"),
                             require_real(config.params, "omega")};
    const double tau1 = require_real(config.params, "tau1");
    const int steps = static_cast<int>(require_int(config.params, "steps"));
    const PositionMode mode = config.params.value("mode", "taylor") == std::string("exact")
                                  ? PositionMode::exact
                                  : PositionMode::taylor;
    const RestartSchedule schedule = restart_schedule(c, tau1, steps, mode);

    seed_flag_counters(record.flags_summary, {"TAYLOR_SUSPECT", "EPS_OUT_OF_RANGE", "ESCAPED"});
    Table table({"n", "eps", "tau", "delta_x", "omega_tau", "taylor_error_bound", "flags"});
    for (const RestartEntry& e : schedule.entries) {
        table.add_row({static_cast<long long>(e.n), e.eps, e.tau, e.delta_x, e.omega_tau,
                       e.taylor_error_bound, flag_names(e.flags)});
        count_flags(record.flags_summary, e.flags);
    }
    emit_outputs(table, config, "tau", "delta_x", record);
    out << "beta=" << format_real(schedule.scales.beta) << "\n";
    out << "t_star=" << format_real(schedule.scales.t_star) << "\n";
    out << "entries=" << schedule.entries.size() << "\n";
    out << "escaped=" << (schedule.escaped() ? "true" : "false") << "\n";
}

inline void run_quantum(const RunConfig& config, std::ostream& out, RunRecord& record) {
    const QuantumConfig q = QuantumConfig::from_detection_amplitude(
        require_real(config.params, "a"), require_real(config.params, "omega"));
    const double tau1 = require_real(config.params, "tau1");
    const int steps = static_cast<int>(require_int(config.params, "steps"));
    const GammaConvention convention =
        config.params.value("gamma-convention", "dimensionless") == std::string("paper-literal")
            ? GammaConvention::paper_literal
            : GammaConvention::dimensionless;
    const MeasurementSchedule schedule = measurement_schedule(q, tau1, steps, convention);

    seed_flag_counters(record.flags_summary, {"TAYLOR_SUSPECT", "PROB_OUT_OF_RANGE", "ESCAPED"});
    Table table({"n", "eta", "tau", "p_taylor", "p_exact", "p_diff", "flags"});
    for (const MeasurementEntry& e : schedule.entries) {
        table.add_row({static_cast<long long>(e.n), e.eta, e.tau, e.p_taylor, e.p_exact, e.p_diff,
                       flag_names(e.flags)});
        count_flags(record.flags_summary, e.flags);
    }
    emit_outputs(table, config, "tau", "p_diff", record);
    out << "gamma=" << format_real(schedule.scales.gamma) << "\n";
    out << "t_q=" << format_real(schedule.scales.t_q) << "\n";
    out << "entries=" << schedule.entries.size() << "\n";
    out << "escaped=" << (schedule.escaped() ? "true" : "false") << "\n";
}

inline void run_bifurcate(const RunConfig& config, std::ostream& out, RunRecord& record) {
    const BifurcationTable scan = bifurcation_scan(
        require_real(config.params, "alpha-min"), require_real(config.params, "alpha-max"),
        require_real(config.params, "alpha-step"), config.params.value("theta0", 0.2),
        static_cast<int>(config.params.value("transient", 2000)),
        static_cast<int>(config.params.value("keep", 64)));

    Table table({"alpha", "value"});
    for (const BifurcationRow& row : scan.rows)
        for (double value : row.values) table.add_row({row.alpha, value});
    emit_outputs(table, config, "alpha", "value", record);
    out << "alphas=" << scan.rows.size() << "\n";
    out << "rows=" << table.rows.size() << "\n";
}

inline void run_lyapunov(const RunConfig& config, std::ostream& out, RunRecord&) {
    const double value = lyapunov_exponent(
        require_real(config.params, "alpha"), config.params.value("theta0", 0.2),
        config.params.value("steps", static_cast<long long>(1000000)),
        static_cast<int>(config.params.value("transient", 1000)));
    out << format_real_sig(value, 12) << "\n";
}

inline void run_ladder(const RunConfig& config, std::ostream& out, RunRecord& record) {
    const LadderResult result = regime_ladder_check(config.params.value("theta0", 0.2));
    seed_flag_counters(record.flags_summary, {"RUNG_FAIL"});
    int passed = 0;
    for (const LadderRung& rung : result.rungs) {
        out << "rung alpha=" << format_real_sig(rung.alpha, 6)
            << " expected=" << regime_name(rung.expected);
        if (rung.expected_period > 0) out << "(" << rung.expected_period << ")";
        out << " result=" << regime_name(rung.report.classification);
        if (rung.report.classification == Regime::periodic)
            out << "(" << rung.report.period << ")";
        if (rung.report.classification == Regime::convergent)
            out << " attractor=" << format_real_sig(rung.report.attractor_values.at(0), 10);
        if (!std::isnan(rung.report.lyapunov))
            out << " lyapunov=" << format_real_sig(rung.report.lyapunov, 6);
        if (!rung.detail.empty()) out << " note=\"" << rung.detail << "\"";
        out << (rung.pass ? " PASS" : " FAIL") << "\n";
        if (rung.pass) ++passed;
        else ++record.flags_summary["RUNG_FAIL"];
    }
    out << "ladder: " << passed << "/" << result.rungs.size() << " rungs pass\n";
}

inline void run_compare(const RunConfig& config, std::ostream& out, RunRecord& record) {
    const OscillatorConfig c{require_real(config.params, "x0"),
                             require_real(config.params, "v0"),
                             require_real(config.params, "omega")};
    const double tau1 = require_real(config.params, "tau1");
    const int steps = static_cast<int>(require_int(config.params, "steps"));

    const RestartSchedule taylor = restart_schedule(c, tau1, steps, PositionMode::taylor);
    const RestartSchedule exact = restart_schedule(c, tau1, steps, PositionMode::exact);
    seed_flag_counters(record.flags_summary, {"TAYLOR_SUSPECT", "EPS_OUT_OF_RANGE", "ESCAPED"});
    const double beta = taylor.scales.beta;

    double max_eps_res = 0.0, max_dx_res = 0.0, max_dx_rel = 0.0;
    double max_exact_res = 0.0;
    bool exact_within_bound = true;
    for (std::size_t i = 0; i < taylor.entries.size(); ++i) {
        const RestartEntry& e = taylor.entries[i];
        const double mapped = logistic_step_unchecked(e.eps, beta);
        if (i + 1 < taylor.entries.size())
            max_eps_res = std::max(max_eps_res, std::abs(taylor.entries[i + 1].eps - mapped));
        const double dx_res = std::abs(e.delta_x - mapped);
        max_dx_res = std::max(max_dx_res, dx_res);
        const double denom = std::max(std::abs(e.delta_x), std::abs(mapped));
        if (denom > 0.0) max_dx_rel = std::max(max_dx_rel, dx_res / denom);
        const double exact_res = std::abs(exact.entries[i].delta_x - mapped);
        max_exact_res = std::max(max_exact_res, exact_res);
        if (exact_res > e.taylor_error_bound) exact_within_bound = false;
        count_flags(record.flags_summary, e.flags);
    }

    // Matched two-level system: the detection amplitude whose dimensionless
    // growth parameter equals beta, seeded at the same relative moment.
    const double p = ((2.0 - beta) + std::sqrt(beta * beta + 4.0)) / 4.0;
    const QuantumConfig q{std::sqrt(p), std::sqrt(1.0 - p), c.omega};
    const QuantumScales qs = scales(q, GammaConvention::dimensionless);
    const double eps1 = taylor.entries.front().eps;
    const MeasurementSchedule quantum =
        measurement_schedule(q, eps1 * qs.t_q, steps, GammaConvention::dimensionless);

    double max_eta_res = 0.0, max_p_diff_rel = 0.0;
    for (std::size_t i = 0; i < quantum.entries.size(); ++i) {
        const MeasurementEntry& e = quantum.entries[i];
        const double mapped = logistic_step_unchecked(e.eta, qs.gamma);
        if (i + 1 < quantum.entries.size())
            max_eta_res = std::max(max_eta_res, std::abs(quantum.entries[i + 1].eta - mapped));
        const double expected_diff = qs.gamma * e.eta * (1.0 - e.eta);
        const double denom = std::max(std::abs(e.p_diff), std::abs(expected_diff));
        if (denom > 0.0)
            max_p_diff_rel = std::max(max_p_diff_rel, std::abs(e.p_diff - expected_diff) / denom);
    }

    if (!config.out_path.empty()) {
        Table table({"n", "eps", "eps_residual", "delta_x_residual", "exact_residual",
                     "taylor_error_bound", "eta", "eta_residual"});
        for (std::size_t i = 0; i < taylor.entries.size(); ++i) {
            const RestartEntry& e = taylor.entries[i];
            const double mapped = logistic_step_unchecked(e.eps, beta);
            const double eps_res = i + 1 < taylor.entries.size()
                                       ? std::abs(taylor.entries[i + 1].eps - mapped)
                                       : 0.0;
            // the quantum schedule can stop earlier when the seed escapes
            double eta = std::numeric_limits<double>::quiet_NaN();
            double eta_res = std::numeric_limits<double>::quiet_NaN();
            if (i < quantum.entries.size()) {
                eta = quantum.entries[i].eta;
                const double q_mapped = logistic_step_unchecked(eta, qs.gamma);
                eta_res = i + 1 < quantum.entries.size()
                              ? std::abs(quantum.entries[i + 1].eta - q_mapped)
                              : 0.0;
            }
            table.add_row({static_cast<long long>(e.n), e.eps, eps_res,
                           std::abs(e.delta_x - mapped),
                           std::abs(exact.entries[i].delta_x - mapped), e.taylor_error_bound,
                           eta, eta_res});
        }
        emit_csv(table, config.out_path);
        record.produced_files.push_back(config.out_path);
    }

    out << "beta=" << format_real(beta) << "\n";
    out << "t_star=" << format_real(taylor.scales.t_star) << "\n";
    out << "eps1=" << format_real(eps1) << "\n";
    out << "entries=" << taylor.entries.size() << "\n";
    out << "max_eps_residual=" << format_real(max_eps_res) << "\n";
    out << "max_delta_x_residual=" << format_real(max_dx_res) << "\n";
    out << "max_delta_x_rel_residual=" << format_real(max_dx_rel) << "\n";
    out << "exact_within_bound=" << (exact_within_bound ? "true" : "false") << "\n";
    out << "max_exact_residual=" << format_real(max_exact_res) << "\n";
    out << "taylor_suspect=" << record.flags_summary["TAYLOR_SUSPECT"] << "\n";
    out << "eps_out_of_range=" << record.flags_summary["EPS_OUT_OF_RANGE"] << "\n";
    out << "escaped=" << record.flags_summary["ESCAPED"] << "\n";
    out << "gamma=" << format_real(qs.gamma) << "\n";
    out << "eta1=" << format_real(quantum.entries.front().eta) << "\n";
    out << "max_eta_residual=" << format_real(max_eta_res) << "\n";
    out << "max_p_diff_rel_residual=" << format_real(max_p_diff_rel) << "\n";
}

} // namespace cli_detail

/// Dispatches a validated config, writes any outputs, and fills the record.
/// exit_code is 0 unless --strict was given and a validity flag was raised.
inline RunRecord run(const RunConfig& config, std::ostream& out = std::cout) {
    RunRecord record;
    record.config_echo = config;
    switch (config.command) {
        case Command::logistic: cli_detail::run_logistic(config, out, record); break;
        case Command::oscillator: cli_detail::run_oscillator(config, out, record); break;
        case Command::quantum: cli_detail::run_quantum(config, out, record); break;
        case Command::bifurcate: cli_detail::run_bifurcate(config, out, record); break;
        case Command::lyapunov: cli_detail::run_lyapunov(config, out, record); break;
        case Command::ladder: cli_detail::run_ladder(config, out, record); break;
        case Command::compare: cli_detail::run_compare(config, out, record); break;
    }
    long long raised = 0;
    for (const auto& [name, count] : record.flags_summary) raised += count;
    record.exit_code = (config.strict && raised > 0) ? kExitStrictViolation : kExitOk;
    return record;
}

/// Process-level entry: maps exceptions onto the 0/1/2/3 exit contract.
inline int run_main(int argc, char** argv) {
    std::vector<std::string> args;
    args.reserve(static_cast<std::size_t>(argc > 0 ? argc - 1 : 0));
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    try {
        const RunConfig config = parse_args(std::move(args));
        const RunRecord record = run(config, std::cout);
        if (record.exit_code == kExitStrictViolation)
            std::cerr << "strict: validity flags raised\n";
        return record.exit_code;
    } catch (const HelpRequested& help) {
        std::cout << help.what();
        return kExitOk;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::domain_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    }
}

} // namespace chaosim
