#include "eeopt/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "eeopt/closedform.hpp"
#include "eeopt/config.hpp"
#include "eeopt/lambertw.hpp"

namespace eeopt::cli {

using nlohmann::json;

std::string format_csv_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.11e", v);
    return buf;
}

std::string surface_csv(const std::vector<numericopt::SurfaceRow>& rows) {
    std::string out = "p_w,b_hz,m,ee_bit_per_j\n";
    for (const auto& r : rows) {
        out += format_csv_double(r.p) + ',' + format_csv_double(r.b) + ',' + format_csv_double(r.m) +
               ',' + format_csv_double(r.ee) + '\n';
    }
    return out;
}

std::string trace_csv(const std::vector<jointopt::TraceEntry>& trace) {
    std::string out = "iteration,p_w,b_hz,m,ee_bit_per_j\n";
    for (const auto& t : trace) {
        out += std::to_string(t.iteration) + ',' + format_csv_double(t.p) + ',' +
               format_csv_double(t.b) + ',' + format_csv_double(t.m) + ',' +
               format_csv_double(t.ee) + '\n';
    }
    return out;
}

namespace {

/// Raised for bad flag combinations detected after CLI11 parsing.
class UsageError : public Error {
public:
    using Error::Error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f || !(f << content)) {
        throw Error("cannot write '" + path + "'");
    }
}

json active_json(const jointopt::ActiveConstraints& a) {
    json list = json::array();
    if (a.p_max) list.push_back("p_max");
    if (a.b_max) list.push_back("b_max");
    if (a.m_max) list.push_back("m_max");
    return list;
}

json warnings_json(bool degenerate, const char* message) {
    json list = json::array();
    if (degenerate) list.push_back(message);
    return list;
}

struct AxisArgs {
    char name = 'p';
    std::optional<double> from;
    std::optional<double> to;
    std::optional<int> points;
    bool log = false;
};

struct Options {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string format = "json";
    std::string output;

    // optimize
    std::string trace_path;
    // sweep
    std::optional<double> p;
    std::optional<double> b;
    std::optional<double> m;
    bool p_at_ratio = false;
    // lambertw
    double x = 0.0;
    double tol = kLambertDefaultTol;
    // oracle
    int refine = 3;
};

config::Scenario resolve_scenario(const Options& opts) {
    std::string path = opts.config_path;
    if (path.empty()) {
        if (const char* env = std::getenv("EE_OPT_CONFIG"); env != nullptr) {
            path = env;
        }
    }
    config::RunConfig cfg;
    if (!path.empty()) {
        cfg = config::parse_config(read_file(path));
    }
    cfg = config::apply_overrides(cfg, opts.overrides);
    return config::to_scenario(cfg);
}

std::vector<AxisArgs> collect_axes(const CLI::App& sweep) {
    std::vector<AxisArgs> axes;
    std::map<const CLI::Option*, std::size_t> seen;
    for (const CLI::Option* opt : sweep.parse_order()) {
        const std::size_t k = seen[opt]++;
        const std::string name = opt->get_name();
        if (name == "--axis") {
            const std::string v = opt->results().at(k);
            if (v != "p" && v != "b" && v != "m") {
                throw UsageError("--axis must be one of p, b, m (got '" + v + "')");
            }
            for (const auto& a : axes) {
                if (a.name == v[0]) {
                    throw UsageError(std::string("axis ") + v + " given twice");
                }
            }
            AxisArgs axis;
            axis.name = v[0];
            axes.push_back(axis);
            continue;
        }
        const bool per_axis = name == "--from" || name == "--to" || name == "--points" || name == "--log";
        if (!per_axis) {
            continue;
        }
        if (axes.empty()) {
            throw UsageError(name + " must follow --axis");
        }
        AxisArgs& a = axes.back();
        if (name == "--log") {
            a.log = true;
        } else if (name == "--points") {
            a.points = std::stoi(opt->results().at(k));
        } else {
            const double v = std::stod(opt->results().at(k));
            (name == "--from" ? a.from : a.to) = v;
        }
    }
    return axes;
}

json surface_json(const std::vector<numericopt::SurfaceRow>& rows) {
    json arr = json::array();
    for (const auto& r : rows) {
        arr.push_back({{"p_w", r.p}, {"b_hz", r.b}, {"m", r.m}, {"ee_bit_per_j", r.ee}});
    }
    return arr;
}

std::string cmd_optimize(const Options& opts, const config::Scenario& s) {
    const auto result = jointopt::joint_optimize(s.hw, s.ch, s.limits);
    const auto report = jointopt::boundary_diagnosis(result, s.hw);
    if (!opts.trace_path.empty()) {
        write_file(opts.trace_path, trace_csv(result.trace));
    }
    json j = {
        {"p_w", result.point.p},
        {"b_hz", result.point.b},
        {"m", static_cast<int>(result.point.m)},
        {"ee_bit_per_j", result.ee},
        {"cap_bit_per_s", result.cap},
        {"snr_db", result.snr_db},
        {"active_constraints", active_json(result.active)},
        {"regime", report.label},
        {"p_per_antenna_gap", report.ratio_gap},
        {"iterations", static_cast<int>(result.trace.size())},
        {"m_continuous", result.continuous.m},
        {"warnings", result.warnings},
    };
    return j.dump(2) + "\n";
}

std::string cmd_sweep(const Options& opts, const CLI::App& sub, const config::Scenario& s) {
    numericopt::GridOracleConfig grid;
    grid.p = numericopt::Axis::fixed(0.0);
    grid.b = numericopt::Axis::fixed(0.0);
    grid.m = numericopt::Axis::fixed(0.0);
    numericopt::FixedAxes fixed;
    fixed.p_at_optimal_ratio = opts.p_at_ratio;

    bool swept_p = false;
    bool swept_b = false;
    bool swept_m = false;
    for (const auto& a : collect_axes(sub)) {
        if (!a.from || !a.to || !a.points) {
            throw UsageError(std::string("axis ") + a.name + " needs --from, --to and --points");
        }
        numericopt::Axis axis{*a.from, *a.to, *a.points, numericopt::Spacing::linear};
        if (a.log) {
            axis.spacing = numericopt::Spacing::log;
        } else if (a.name == 'm') {
            axis.spacing = numericopt::Spacing::integer;
        }
        switch (a.name) {
            case 'p': grid.p = axis; swept_p = true; break;
            case 'b': grid.b = axis; swept_b = true; break;
            default: grid.m = axis; swept_m = true; break;
        }
    }
    if (swept_p && opts.p_at_ratio) {
        throw UsageError("--p-at-ratio ties P to B; do not also sweep p");
    }
    if ((swept_p && opts.p) || (swept_b && opts.b) || (swept_m && opts.m)) {
        throw UsageError("an axis cannot be both swept and fixed");
    }
    if (!swept_p && !opts.p_at_ratio) fixed.p = opts.p.value_or(s.limits.p_max);
    if (!swept_b) fixed.b = opts.b.value_or(s.limits.b_max);
    if (!swept_m) fixed.m = opts.m.value_or(1.0);

    const auto rows = numericopt::ee_surface(grid, s.hw, s.ch, fixed);
    if (opts.format == "json") {
        return surface_json(rows).dump(2) + "\n";
    }
    return surface_csv(rows);
}

std::string cmd_ratio_pb(const std::optional<double>& m_opt, const config::Scenario& s) {
    const bool searched = !m_opt;
    const double m = m_opt.value_or(closedform::optimal_m_asymptotic(s.hw, s.ch, s.limits.m_max));
    if (!(m >= 1.0)) {
        throw ValidationError("m", format_number(m), ">= 1");
    }
    const auto r = closedform::optimal_psd_ratio(m, s.hw, s.ch);
    json j = {
        {"m", m},
        {"m_from_scan", searched},
        {"u", r.u},
        {"snr", r.snr_star},
        {"snr_db", units::linear_to_db(r.snr_star)},
        {"z_star_w_per_hz", r.z_star},
        {"ee_max_bit_per_j", closedform::ee_max_asymptotic(m, s.hw, s.ch)},
        {"spectral_efficiency_bit_per_s_per_hz", closedform::rate_at_optimal_ratio(1.0, r.u)},
        {"warnings", warnings_json(r.degenerate, "nu = 0: EE is a supremum as P/B -> 0")},
    };
    return j.dump(2) + "\n";
}

std::string cmd_ratio_pm(const Options& opts, const config::Scenario& s) {
    const double b = opts.b.value_or(s.limits.b_max);
    json j = {{"b_hz", b}, {"p_per_antenna_w", closedform::power_per_antenna_ratio(b, s.hw)}};
    return j.dump(2) + "\n";
}

double require_positive(const std::optional<double>& v, const char* flag) {
    if (!v) {
        throw UsageError(std::string(flag) + " is required");
    }
    if (!(*v > 0.0) || !std::isfinite(*v)) {
        throw ValidationError(flag, format_number(*v), "> 0");
    }
    return *v;
}

std::string cmd_opt_p(const Options& opts, const config::Scenario& s) {
    const double b = require_positive(opts.b, "--b");
    const double m = require_positive(opts.m, "--m");
    const auto r = closedform::optimal_power(b, m, s.hw, s.ch);
    json j = {
        {"b_hz", b},
        {"m", m},
        {"p_w", r.p},
        {"v", r.v},
        {"ee_bit_per_j", r.p > 0.0 ? model::energy_efficiency({r.p, b, m}, s.hw, s.ch) : 0.0},
        {"warnings", warnings_json(r.degenerate, "no circuit power: EE is a supremum as P -> 0")},
    };
    return j.dump(2) + "\n";
}

std::string cmd_opt_b(const Options& opts, const config::Scenario& s) {
    const double p = require_positive(opts.p, "--p");
    const double m = require_positive(opts.m, "--m");
    numericopt::BracketSearchConfig bracket;
    bracket.upper = s.limits.b_max;
    bracket.lower = std::min(bracket.lower, s.limits.b_max * 0.5);
    const double b = numericopt::optimal_bandwidth(p, m, s.hw, s.ch, bracket);
    const auto terms = numericopt::bandwidth_stationarity(b, p, m, s.hw, s.ch);
    json j = {
        {"p_w", p},
        {"m", m},
        {"b_hz", b},
        {"ee_bit_per_j", model::energy_efficiency({p, b, m}, s.hw, s.ch)},
        {"stationarity_residual", terms.residual() / terms.rhs},
    };
    return j.dump(2) + "\n";
}

std::string cmd_opt_m(const Options& opts, const config::Scenario& s) {
    const double b = require_positive(opts.b, "--b");
    const double p = require_positive(opts.p, "--p");
    const auto r = closedform::optimal_antennas(b, p, s.hw, s.ch);
    json j = {
        {"b_hz", b},
        {"p_w", p},
        {"m", r.m},
        {"w", r.w},
        {"ee_bit_per_j", model::energy_efficiency({p, b, r.m}, s.hw, s.ch)},
    };
    return j.dump(2) + "\n";
}

std::string cmd_lambertw(const Options& opts) {
    const double w = lambert_w0(opts.x, opts.tol);
    const double residual = std::abs(w * std::exp(w) - opts.x);
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.10f", w);
    json j = {{"x", opts.x}, {"w", w}, {"w_10dp", buf}, {"residual", residual}};
    return j.dump(2) + "\n";
}

std::string cmd_oracle(const Options& opts, const config::Scenario& s) {
    auto grid = numericopt::GridOracleConfig::defaults_for(s.limits);
    grid.refinement_rounds = opts.refine;
    const auto r = numericopt::brute_force_optimum(s.hw, s.ch, s.limits, grid);
    json j = {
        {"p_w", r.point.p},
        {"b_hz", r.point.b},
        {"m", r.point.m},
        {"ee_bit_per_j", r.ee},
        {"evaluations", r.evaluations},
        {"refinement_rounds", opts.refine},
    };
    return j.dump(2) + "\n";
}

void write_error(std::ostream& err, const std::string& subcommand, const std::string& kind,
                 const std::string& message) {
    json j = {{"error", {{"subcommand", subcommand}, {"kind", kind}, {"message", message}}}};
    err << j.dump() << "\n";
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Energy-efficiency optimal operating points for a multi-antenna link", "eeopt"};
    app.require_subcommand(1);
    Options opts;
    app.add_option("--config", opts.config_path, "Config file (default: $EE_OPT_CONFIG)");
    app.add_option("--set", opts.overrides, "Override a config key, key=value (repeatable)");
    app.fallthrough();

    auto* optimize = app.add_subcommand("optimize", "Joint (P, B, M) optimization");
    optimize->add_option("--trace", opts.trace_path, "Write the iteration trace as CSV");

    auto* sweep = app.add_subcommand("sweep", "EE surface over swept axes");
    sweep->add_option("--axis", "Start an axis: p, b or m")->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)->expected(1);
    sweep->add_option("--from", "Axis start")->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)->expected(1);
    sweep->add_option("--to", "Axis end")->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)->expected(1);
    sweep->add_option("--points", "Axis point count")->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)->expected(1);
    sweep->add_flag("--log", "Log spacing for the current axis")->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    sweep->add_option("--p", opts.p, "Fixed power [W]");
    sweep->add_option("--b", opts.b, "Fixed bandwidth [Hz]");
    sweep->add_option("--m", opts.m, "Fixed antenna count");
    sweep->add_flag("--p-at-ratio", opts.p_at_ratio, "Set P = z*(M) B from the optimal P/B ratio");
    std::string sweep_format = "csv";
    sweep->add_option("--format", sweep_format)->check(CLI::IsMember({"csv", "json"}));
    sweep->add_option("--output", opts.output, "Write to a file instead of stdout");

    std::optional<double> ratio_m;
    auto* ratio_pb = app.add_subcommand("ratio-pb", "Optimal P/B ratio at M");
    ratio_pb->add_option("--m", ratio_m, "Antenna count (default: best M by exhaustive scan)");

    auto* ratio_pm = app.add_subcommand("ratio-pm", "Optimal P/M ratio at B");
    ratio_pm->add_option("--b", opts.b, "Bandwidth [Hz] (default: B_max)");

    auto* opt_p = app.add_subcommand("opt-p", "Optimal power for fixed (B, M)");
    opt_p->add_option("--b", opts.b)->required();
    opt_p->add_option("--m", opts.m)->required();

    auto* opt_b = app.add_subcommand("opt-b", "Optimal bandwidth for fixed (P, M)");
    opt_b->add_option("--p", opts.p)->required();
    opt_b->add_option("--m", opts.m)->required();

    auto* opt_m = app.add_subcommand("opt-m", "Optimal antenna count for fixed (B, P)");
    opt_m->add_option("--b", opts.b)->required();
    opt_m->add_option("--p", opts.p)->required();

    auto* lambertw = app.add_subcommand("lambertw", "Evaluate W0(x)");
    lambertw->add_option("x", opts.x)->required();
    lambertw->add_option("--tol", opts.tol)->check(CLI::Range(1e-300, 1e-6));

    auto* oracle = app.add_subcommand("oracle", "Refined brute-force grid optimum");
    oracle->add_option("--refine", opts.refine, "Refinement rounds")->check(CLI::Range(0, 12));

    std::string subcommand;
    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
        subcommand = app.get_subcommands().front()->get_name();
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        if (!app.get_subcommands().empty()) {
            subcommand = app.get_subcommands().front()->get_name();
            write_error(err, subcommand, "usage", e.what());
            return 2;
        }
        // Report a stray word as an unknown subcommand rather than a missing one.
        for (std::size_t i = 0; i < args.size(); ++i) {
            const std::string& a = args[i];
            const bool takes_value = a == "--config" || a == "--set";
            if (takes_value) {
                ++i;
            } else if (!a.empty() && a[0] != '-') {
                write_error(err, "", "usage", "unknown subcommand '" + a + "'");
                return 2;
            }
        }
        write_error(err, subcommand, "usage", e.what());
        return 2;
    }

    try {
        std::string text;
        if (subcommand == "lambertw") {
            text = cmd_lambertw(opts);
        } else {
            const auto scenario = resolve_scenario(opts);
            if (subcommand == "optimize") {
                text = cmd_optimize(opts, scenario);
            } else if (subcommand == "sweep") {
                opts.format = sweep_format;
                text = cmd_sweep(opts, *sweep, scenario);
            } else if (subcommand == "ratio-pb") {
                text = cmd_ratio_pb(ratio_m, scenario);
            } else if (subcommand == "ratio-pm") {
                text = cmd_ratio_pm(opts, scenario);
            } else if (subcommand == "opt-p") {
                text = cmd_opt_p(opts, scenario);
            } else if (subcommand == "opt-b") {
                text = cmd_opt_b(opts, scenario);
            } else if (subcommand == "opt-m") {
                text = cmd_opt_m(opts, scenario);
            } else {
                text = cmd_oracle(opts, scenario);
            }
        }
        if (!opts.output.empty()) {
            write_file(opts.output, text);
        } else {
            out << text;
        }
        return 0;
    } catch (const UsageError& e) {
        write_error(err, subcommand, "usage", e.what());
        return 2;
    } catch (const config::ParseError& e) {
        write_error(err, subcommand, "parse", e.what());
    } catch (const ValidationError& e) {
        write_error(err, subcommand, "validation", e.what());
    } catch (const DomainError& e) {
        write_error(err, subcommand, "domain", e.what());
    } catch (const ConvergenceError& e) {
        write_error(err, subcommand, "convergence", e.what());
    } catch (const std::exception& e) {
        write_error(err, subcommand, "runtime", e.what());
    }
    return 1;
}

}  // namespace eeopt::cli
