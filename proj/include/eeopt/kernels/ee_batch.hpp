#pragma once

#include <cmath>
#include <span>
#include <string_view>

#include "eeopt/model.hpp"

namespace eeopt::kernels {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);

/// True when this binary carries the AVX2 kernel and the CPU can run it.
bool avx2_available();

/// Widest usable kernel. The environment variable EEOPT_ISA=scalar forces the
/// reference path.
Isa active_isa();

/// Constants hoisted out of the inner loop.
struct EeLaneConstants {
    double inv_kappa;
    double mu;
    double d0;
    double nu;
    double eta;
    double gain_over_noise;  ///< beta / N0 [1/(W/Hz)]

    static EeLaneConstants from(const HardwareProfile& hw, const ChannelGain& ch) {
        return {1.0 / hw.kappa, hw.mu, hw.d0, hw.nu, hw.eta, ch.beta / hw.n0};
    }
};

/// Single-lane reference. model::energy_efficiency and the scalar kernel both
/// route through here so the two agree bit for bit.
inline double ee_lane(double p, double b, double m, const EeLaneConstants& k) {
    const double snr = m * p * k.gain_over_noise / b;
    const double cap = b * std::log1p(snr) * model::kLog2E;
    const double pc = p * k.inv_kappa + k.mu + (k.d0 + k.nu * b) * m + k.eta * cap;
    return cap / pc;
}

void ee_batch_scalar(std::span<const double> p, std::span<const double> b,
                     std::span<const double> m, const EeLaneConstants& k, std::span<double> out);

/// Requires avx2_available(); behavior is undefined otherwise.
void ee_batch_avx2(std::span<const double> p, std::span<const double> b,
                   std::span<const double> m, const EeLaneConstants& k, std::span<double> out);

void ee_batch(Isa isa, std::span<const double> p, std::span<const double> b,
              std::span<const double> m, const EeLaneConstants& k, std::span<double> out);

/// log1p over 4 lanes at a time, exposed for equivalence testing. Domain:
/// finite x >= 0.
void log1p_batch(Isa isa, std::span<const double> x, std::span<double> out);

}  // namespace eeopt::kernels
