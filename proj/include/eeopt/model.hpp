#pragma once

#include <numbers>
#include <span>

#include "eeopt/units.hpp"

namespace eeopt {

/// Hardware power-consumption constants of the base station, in SI units.
///
/// Total consumption is P/kappa + mu + (d0 + nu*B)*M + eta*C.
struct HardwareProfile {
    double kappa = 0.4;     ///< PA efficiency, (0, 1]
    double mu = 0.1;        ///< fixed circuit power P_FIX + P_SYN [W]
    double d0 = 0.02;       ///< per transceiver chain [W]
    double nu = 1e-10;      ///< per-sample processing energy [J/sample]
    double eta = 1e-11;     ///< coding/backhaul energy [J/bit]
    double n0 = units::dbm_to_watt(-174.0);  ///< noise PSD [W/Hz]

    static HardwareProfile reference() { return {}; }

    /// Throws ValidationError naming the first offending field.
    void validate() const;
};

/// Linear per-antenna channel gain beta.
struct ChannelGain {
    double beta = units::db_to_linear(-110.0);

    static ChannelGain from_db(double db) { return {units::db_to_linear(db)}; }
    double to_db() const { return units::linear_to_db(beta); }
    static ChannelGain reference() { return {}; }

    void validate() const;
};

/// Candidate operating point. `m` is real during the continuous relaxation.
struct DesignPoint {
    double p = 0.0;  ///< transmit power [W]
    double b = 0.0;  ///< bandwidth [Hz]
    double m = 0.0;  ///< antennas

    void validate() const;
    bool has_integer_m() const;
};

/// Box constraints plus the ascent stopping threshold.
struct Limits {
    double p_max = units::dbm_to_watt(40.0);  ///< [W]
    double b_max = 1e10;     ///< [Hz]
    int m_max = 512;
    double delta = 0.1;      ///< [bit/J]

    static Limits reference() { return {}; }

    void validate() const;
    bool feasible(const DesignPoint& dp) const;
};

namespace model {

inline constexpr double kLog2E = std::numbers::log2e;

/// Received SNR M*P*beta / (B*N0).
double snr(const DesignPoint& dp, const HardwareProfile& hw, const ChannelGain& ch);

/// MISO capacity B*log2(1 + snr) [bit/s].
double capacity(const DesignPoint& dp, const HardwareProfile& hw, const ChannelGain& ch);

/// Total power consumption [W].
double power_consumption(const DesignPoint& dp, const HardwareProfile& hw, const ChannelGain& ch);

/// capacity / power_consumption [bit/J].
double energy_efficiency(const DesignPoint& dp, const HardwareProfile& hw, const ChannelGain& ch);

/// Individual terms of the consumption model; their sum is power_consumption().
struct PowerBreakdown {
    double amplifier = 0.0;   ///< P/kappa
    double fixed = 0.0;       ///< mu
    double chains = 0.0;      ///< d0*M
    double processing = 0.0;  ///< nu*B*M
    double coding = 0.0;      ///< eta*C

    double total() const { return amplifier + fixed + chains + processing + coding; }
};

PowerBreakdown power_breakdown(const DesignPoint& dp, const HardwareProfile& hw, const ChannelGain& ch);

/// Structure-of-arrays EE evaluation; all spans must have equal length.
///
/// Dispatches to the widest kernel the running CPU supports. Results agree
/// with energy_efficiency() to within a few ulp.
void energy_efficiency_batch(std::span<const double> p, std::span<const double> b,
                             std::span<const double> m, const HardwareProfile& hw,
                             const ChannelGain& ch, std::span<double> out);

}  // namespace model
}  // namespace eeopt
