#pragma once

#include "eeopt/model.hpp"

namespace eeopt::closedform {

/// Optimal power spectral density at a given antenna count, neglecting the
/// mu/B and D0*M/B terms.
struct RatioSolution {
    double z_star = 0.0;    ///< P/B [W/Hz]
    double u = 0.0;         ///< exponent, snr_star = e^u - 1
    double snr_star = 0.0;
    bool degenerate = false;  ///< nu == 0: EE is a supremum as z -> 0
};

struct PowerSolution {
    double p = 0.0;  ///< [W]
    double v = 0.0;
    bool degenerate = false;  ///< no circuit power: EE is a supremum as P -> 0
};

/// Stationary antenna count; not clamped to [1, M_max].
struct AntennaSolution {
    double m = 0.0;
    double w = 0.0;
};

RatioSolution optimal_psd_ratio(double m, const HardwareProfile& hw, const ChannelGain& ch);

/// Upper bound on EE at antenna count m, attained along the optimal P/B ray
/// as B grows.
double ee_max_asymptotic(double m, const HardwareProfile& hw, const ChannelGain& ch);

/// Exhaustive scan of ee_max_asymptotic over 1..m_max; ties go to the smaller M.
int optimal_m_asymptotic(const HardwareProfile& hw, const ChannelGain& ch, int m_max);

/// Rate B*u*log2(e) reached anywhere on the optimal P/B ray.
double rate_at_optimal_ratio(double b, double u);

/// EE-maximizing transmit power for fixed (B, M).
PowerSolution optimal_power(double b, double m, const HardwareProfile& hw, const ChannelGain& ch);

/// EE-maximizing real antenna count for fixed (B, P). Throws DomainError if
/// D0 + nu*B == 0, where EE grows without bound in M.
AntennaSolution optimal_antennas(double b, double p, const HardwareProfile& hw,
                                 const ChannelGain& ch);

/// Power per antenna kappa*(D0 + nu*B) at an interior (P, M) optimum.
double power_per_antenna_ratio(double b, const HardwareProfile& hw);

/// Result of alternating optimal_power / optimal_antennas at fixed B.
struct InteriorFixedPoint {
    double p = 0.0;
    double m = 0.0;
    int iterations = 0;
};

/// Alternates the power and antenna maximizers at fixed B, starting from M = 1,
/// until both change by less than rel_tol. No clamping is applied.
InteriorFixedPoint alternate_power_antennas(double b, const HardwareProfile& hw,
                                            const ChannelGain& ch, double rel_tol = 1e-12,
                                            int max_iterations = 1000);

}  // namespace eeopt::closedform
