#include "eeopt/closedform.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "eeopt/error.hpp"
#include "eeopt/lambertw.hpp"

namespace eeopt::closedform {
namespace {

// log of a product of nonnegative factors; -inf if any factor is zero.
template <typename... Ts>
double log_product(Ts... factors) {
    return (std::log(factors) + ...);
}

}  // namespace

RatioSolution optimal_psd_ratio(double m, const HardwareProfile& hw, const ChannelGain& ch) {
    // W argument: kappa M^2 beta nu / (N0 e) - 1/e
    const double log_a = log_product(hw.kappa, m, m, ch.beta, hw.nu) - std::log(hw.n0);
    RatioSolution out;
    out.u = lambert_shifted_exponent(log_a);
    out.snr_star = std::expm1(out.u);
    out.z_star = hw.n0 * out.snr_star / (m * ch.beta);
    out.degenerate = hw.nu == 0.0;
    return out;
}

double ee_max_asymptotic(double m, const HardwareProfile& hw, const ChannelGain& ch) {
    const double u = optimal_psd_ratio(m, hw, ch).u;
    const double bits = u * model::kLog2E;
    return bits / (hw.n0 * std::expm1(u) / (hw.kappa * m * ch.beta) + hw.nu * m + hw.eta * bits);
}

int optimal_m_asymptotic(const HardwareProfile& hw, const ChannelGain& ch, int m_max) {
    if (m_max < 1) {
        throw DomainError("optimal_m_asymptotic: m_max must be >= 1", m_max);
    }
    int best = 1;
    double best_ee = ee_max_asymptotic(1.0, hw, ch);
    for (int m = 2; m <= m_max; ++m) {
        const double ee = ee_max_asymptotic(m, hw, ch);
        if (ee > best_ee) {
            best = m;
            best_ee = ee;
        }
    }
    return best;
}

double rate_at_optimal_ratio(double b, double u) { return b * u * model::kLog2E; }

PowerSolution optimal_power(double b, double m, const HardwareProfile& hw, const ChannelGain& ch) {
    const double circuit = hw.mu + (hw.d0 + hw.nu * b) * m;
    // kappa M beta (mu + (D0 + nu B) M) / (B N0 e) - 1/e
    const double log_a = log_product(hw.kappa, m, ch.beta, circuit) - std::log(b) - std::log(hw.n0);
    PowerSolution out;
    out.v = lambert_shifted_exponent(log_a);
    out.p = b * hw.n0 * std::expm1(out.v) / (m * ch.beta);
    out.degenerate = circuit == 0.0;
    return out;
}

AntennaSolution optimal_antennas(double b, double p, const HardwareProfile& hw,
                                 const ChannelGain& ch) {
    const double per_chain = hw.d0 + hw.nu * b;
    if (per_chain == 0.0) {
        throw DomainError("optimal_antennas: D0 + nu*B is zero, EE is unbounded in M", per_chain);
    }
    // P beta (P/kappa + mu) / (B N0 e (D0 + nu B)) - 1/e
    const double log_a = log_product(p, ch.beta, p / hw.kappa + hw.mu) - std::log(b) -
                         std::log(hw.n0) - std::log(per_chain);
    AntennaSolution out;
    out.w = lambert_shifted_exponent(log_a);
    out.m = b * hw.n0 * std::expm1(out.w) / (p * ch.beta);
    return out;
}

double power_per_antenna_ratio(double b, const HardwareProfile& hw) {
    return hw.kappa * (hw.d0 + hw.nu * b);
}

InteriorFixedPoint alternate_power_antennas(double b, const HardwareProfile& hw,
                                            const ChannelGain& ch, double rel_tol,
                                            int max_iterations) {
    InteriorFixedPoint fp{.p = 0.0, .m = 1.0, .iterations = 0};
    for (int it = 1; it <= max_iterations; ++it) {
        const double p = optimal_power(b, fp.m, hw, ch).p;
        const double m = optimal_antennas(b, p, hw, ch).m;
        const double change = std::abs(p / fp.p - 1.0) + std::abs(m / fp.m - 1.0);
        fp = {p, m, it};
        if (change <= rel_tol) {
            return fp;
        }
    }
    throw ConvergenceError("alternate_power_antennas: no fixed point after " +
                           std::to_string(max_iterations) + " iterations at B = " +
                           format_number(b));
}

}  // namespace eeopt::closedform
