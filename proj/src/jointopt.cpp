#include "eeopt/jointopt.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "eeopt/closedform.hpp"
#include "eeopt/units.hpp"

namespace eeopt::jointopt {

Candidate best_power_bandwidth(double m, const HardwareProfile& hw, const ChannelGain& ch,
                               const Limits& limits, const JointOptions& opts) {
    // Power maximizer at maximum bandwidth.
    const double p = std::min(closedform::optimal_power(limits.b_max, m, hw, ch).p, limits.p_max);
    const DesignPoint at_b_max{p, limits.b_max, m};
    const double ee_b_max = model::energy_efficiency(at_b_max, hw, ch);

    // Bandwidth maximizer at maximum power.
    numericopt::BracketSearchConfig bracket = opts.bracket;
    bracket.upper = limits.b_max;
    bracket.lower = std::min(bracket.lower, limits.b_max * 0.5);
    // The stationarity residual changes sign once, from + to -. Nonnegative at
    // B_max means EE is still rising there.
    const bool rising_at_max =
        numericopt::bandwidth_stationarity(limits.b_max, limits.p_max, m, hw, ch).residual() >= 0.0;
    const double b = rising_at_max
                         ? limits.b_max
                         : std::min(numericopt::optimal_bandwidth(limits.p_max, m, hw, ch, bracket),
                                    limits.b_max);
    const DesignPoint at_p_max{limits.p_max, b, m};
    const double ee_p_max = model::energy_efficiency(at_p_max, hw, ch);

    if (ee_p_max >= ee_b_max) {
        return {at_p_max, ee_p_max, Branch::power_at_max};
    }
    return {at_b_max, ee_b_max, Branch::bandwidth_at_max};
}

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace

OptimizationResult joint_optimize(const HardwareProfile& hw, const ChannelGain& ch,
                                  const Limits& limits, const JointOptions& opts) {
    hw.validate();
    ch.validate();
    limits.validate();

    OptimizationResult result;
    const auto warn = [&result](const std::string& msg) {
        if (std::find(result.warnings.begin(), result.warnings.end(), msg) == result.warnings.end()) {
            result.warnings.push_back(msg);
        }
    };
    if (hw.nu == 0.0) {
        warn("nu = 0: bandwidth is unbounded in the unconstrained problem");
    }

    double m = 1.0;
    double prev_ee = 0.0;
    Candidate cur;
    for (int it = 1;; ++it) {
        if (it > opts.max_iterations) {
            throw JointConvergenceError("joint_optimize: no convergence after " +
                                            std::to_string(opts.max_iterations) + " iterations",
                                        std::move(result.trace));
        }
        cur = best_power_bandwidth(m, hw, ch, limits, opts);
        if (cur.branch == Branch::bandwidth_at_max &&
            closedform::optimal_power(limits.b_max, m, hw, ch).degenerate) {
            warn("no circuit power: EE is maximized as P -> 0");
        }

        const double m_stat = closedform::optimal_antennas(cur.point.b, cur.point.p, hw, ch).m;
        m = std::clamp(m_stat, 1.0, static_cast<double>(limits.m_max));
        cur.point.m = m;
        cur.ee = model::energy_efficiency(cur.point, hw, ch);

        // Each step is an exact coordinate maximization, so EE can only rise.
        if (!result.trace.empty() && cur.ee < prev_ee * (1.0 - 1e-12)) {
            throw ConvergenceError("joint_optimize: EE decreased from " + fmt(prev_ee) + " to " +
                                   fmt(cur.ee) + " at iteration " + std::to_string(it));
        }
        result.trace.push_back({it, cur.point.p, cur.point.b, cur.point.m, cur.ee});

        const double gain = cur.ee - prev_ee;
        const bool done = it > 1 && (gain <= limits.delta || gain <= opts.rel_tolerance * cur.ee);
        prev_ee = std::max(prev_ee, cur.ee);
        if (done) {
            break;
        }
    }
    result.continuous = cur.point;

    const double lo = std::floor(m);
    const double hi = std::ceil(m);
    result.candidates[0] = best_power_bandwidth(lo, hw, ch, limits, opts);
    result.candidates[1] =
        hi == lo ? result.candidates[0] : best_power_bandwidth(hi, hw, ch, limits, opts);
    // Ties keep the smaller antenna count.
    const Candidate& pick =
        result.candidates[1].ee > result.candidates[0].ee ? result.candidates[1] : result.candidates[0];

    result.point = pick.point;
    result.branch = pick.branch;
    result.ee = model::energy_efficiency(result.point, hw, ch);
    result.cap = model::capacity(result.point, hw, ch);
    result.snr_db = units::linear_to_db(model::snr(result.point, hw, ch));
    result.active = {
        .p_max = result.point.p == limits.p_max,
        .b_max = result.point.b == limits.b_max,
        .m_max = result.point.m == static_cast<double>(limits.m_max),
    };
    return result;
}

BoundaryReport boundary_diagnosis(const OptimizationResult& result, const HardwareProfile& hw) {
    BoundaryReport report;
    const bool p = result.active.p_max;
    const bool b = result.active.b_max;
    if (p && b) {
        report.regime = Regime::both;
        report.label = "power- and bandwidth-limited";
    } else if (p) {
        report.regime = Regime::power_limited;
        report.label = "power-limited";
    } else if (b) {
        report.regime = Regime::bandwidth_limited;
        report.label = "bandwidth-limited";
    } else {
        // Unreachable for results of joint_optimize.
        report.regime = Regime::both;
        report.label = "interior";
    }
    const double per_antenna = result.point.p / result.point.m;
    const double ideal = closedform::power_per_antenna_ratio(result.point.b, hw);
    report.ratio_gap = per_antenna / ideal - 1.0;

    report.text = report.label + ": P = " + fmt(result.point.p) + " W, B = " + fmt(result.point.b) +
                  " Hz, M = " + fmt(result.point.m) + "; P/M = " + fmt(per_antenna) +
                  " W vs kappa(D0 + nu B) = " + fmt(ideal) + " W (gap " +
                  fmt(100.0 * report.ratio_gap) + "%)";
    if (result.active.m_max) {
        report.text += "; antenna limit active";
    }
    return report;
}

}  // namespace eeopt::jointopt
