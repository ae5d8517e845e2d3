#include "eeopt/model.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "eeopt/error.hpp"
#include "eeopt/kernels/ee_batch.hpp"

namespace eeopt {
namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void require(bool ok, const char* key, double value, const char* constraint) {
    if (!ok) {
        throw ValidationError(key, num(value), constraint);
    }
}

}  // namespace

void HardwareProfile::validate() const {
    require(kappa > 0.0 && kappa <= 1.0, "kappa", kappa, "(0, 1]");
    require(mu >= 0.0 && std::isfinite(mu), "mu", mu, ">= 0");
    require(d0 >= 0.0 && std::isfinite(d0), "d0", d0, ">= 0");
    require(nu >= 0.0 && std::isfinite(nu), "nu", nu, ">= 0");
    require(eta >= 0.0 && std::isfinite(eta), "eta", eta, ">= 0");
    require(n0 > 0.0 && std::isfinite(n0), "n0", n0, "> 0");
}

void ChannelGain::validate() const {
    require(beta > 0.0 && std::isfinite(beta), "beta", beta, "> 0");
}

void DesignPoint::validate() const {
    require(p > 0.0 && std::isfinite(p), "p", p, "> 0");
    require(b > 0.0 && std::isfinite(b), "b", b, "> 0");
    require(m > 0.0 && std::isfinite(m), "m", m, "> 0");
}

bool DesignPoint::has_integer_m() const { return m >= 1.0 && std::floor(m) == m; }

void Limits::validate() const {
    require(p_max > 0.0 && std::isfinite(p_max), "p_max", p_max, "> 0");
    require(b_max > 0.0 && std::isfinite(b_max), "b_max", b_max, "> 0");
    require(m_max >= 1, "m_max", m_max, ">= 1");
    require(delta > 0.0 && std::isfinite(delta), "delta", delta, "> 0");
}

bool Limits::feasible(const DesignPoint& dp) const {
    return dp.p > 0.0 && dp.p <= p_max && dp.b > 0.0 && dp.b <= b_max && dp.m >= 1.0 &&
           dp.m <= m_max;
}

namespace model {

double snr(const DesignPoint& dp, const HardwareProfile& hw, const ChannelGain& ch) {
    return dp.m * dp.p * (ch.beta / hw.n0) / dp.b;
}

double capacity(const DesignPoint& dp, const HardwareProfile& hw, const ChannelGain& ch) {
    return dp.b * std::log1p(snr(dp, hw, ch)) * kLog2E;
}

PowerBreakdown power_breakdown(const DesignPoint& dp, const HardwareProfile& hw,
                               const ChannelGain& ch) {
    return {
        .amplifier = dp.p / hw.kappa,
        .fixed = hw.mu,
        .chains = hw.d0 * dp.m,
        .processing = hw.nu * dp.b * dp.m,
        .coding = hw.eta * capacity(dp, hw, ch),
    };
}

double power_consumption(const DesignPoint& dp, const HardwareProfile& hw, const ChannelGain& ch) {
    return dp.p / hw.kappa + hw.mu + (hw.d0 + hw.nu * dp.b) * dp.m + hw.eta * capacity(dp, hw, ch);
}

double energy_efficiency(const DesignPoint& dp, const HardwareProfile& hw, const ChannelGain& ch) {
    return kernels::ee_lane(dp.p, dp.b, dp.m, kernels::EeLaneConstants::from(hw, ch));
}

void energy_efficiency_batch(std::span<const double> p, std::span<const double> b,
                             std::span<const double> m, const HardwareProfile& hw,
                             const ChannelGain& ch, std::span<double> out) {
    kernels::ee_batch(kernels::active_isa(), p, b, m, kernels::EeLaneConstants::from(hw, ch), out);
}

}  // namespace model
}  // namespace eeopt
