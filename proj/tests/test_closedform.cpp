#include <doctest.h>

#include <cmath>
#include <numbers>

#include "eeopt/closedform.hpp"
#include "eeopt/error.hpp"
#include "support/oracles.hpp"

using namespace eeopt;
using namespace eeopt::closedform;
using eeopt::testing::rel_diff;

namespace {

const HardwareProfile kHw = HardwareProfile::reference();

ChannelGain gain_db(double db) { return ChannelGain::from_db(db); }

double ee_at(double p, double b, double m, const HardwareProfile& hw, const ChannelGain& ch) {
    return model::energy_efficiency({p, b, m}, hw, ch);
}

}  // namespace

TEST_CASE("optimal P/B ratio") {
    SUBCASE("W argument zero gives u = 1") {
        const HardwareProfile hw{.kappa = 0.5, .mu = 0.1, .d0 = 0.02, .nu = 1e-10, .eta = 0.0, .n0 = 2e-20};
        const ChannelGain ch{1e-10};
        const auto r = optimal_psd_ratio(2.0, hw, ch);
        CHECK(r.u == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(r.z_star == doctest::Approx(hw.n0 * (std::numbers::e - 1.0) / (2.0 * ch.beta)).epsilon(1e-14));
    }
    SUBCASE("reported operating SNRs") {
        CHECK(units::linear_to_db(optimal_psd_ratio(6.0, kHw, gain_db(-110)).snr_star) ==
              doctest::Approx(5.71).epsilon(0.005 / 5.71));
        CHECK(units::linear_to_db(optimal_psd_ratio(20.0, kHw, gain_db(-120)).snr_star) ==
              doctest::Approx(6.00).epsilon(0.005 / 6.0));
        CHECK(units::linear_to_db(optimal_psd_ratio(2.0, kHw, gain_db(-100)).snr_star) ==
              doctest::Approx(6.00).epsilon(0.005 / 6.0));
    }
    SUBCASE("spectral density at -100 dB, M = 2") {
        // Independent evaluation (SciPy lambertw): 7.927263458687015e-11 W/Hz.
        CHECK(optimal_psd_ratio(2.0, kHw, gain_db(-100)).z_star ==
              doctest::Approx(7.927263458687015e-11).epsilon(1e-10));
    }
    SUBCASE("z* = snr* N0 / (M beta)") {
        for (double db : {-100.0, -110.0, -120.0}) {
            for (double m : {1.0, 6.0, 20.0, 300.0}) {
                const auto ch = gain_db(db);
                const auto r = optimal_psd_ratio(m, kHw, ch);
                CHECK(rel_diff(r.z_star, r.snr_star * kHw.n0 / (m * ch.beta)) < 1e-12);
                CHECK(r.snr_star > 0.0);
                CHECK_FALSE(r.degenerate);
            }
        }
    }
    SUBCASE("nu = 0 is flagged degenerate") {
        HardwareProfile hw = kHw;
        hw.nu = 0.0;
        const auto r = optimal_psd_ratio(6.0, hw, gain_db(-110));
        CHECK(r.degenerate);
        CHECK(r.u == 0.0);
        CHECK(r.z_star == 0.0);
    }
    SUBCASE("extreme antenna counts stay finite") {
        const auto r = optimal_psd_ratio(1e150, kHw, gain_db(-110));
        CHECK(std::isfinite(r.u));
        CHECK(r.u > 600.0);
    }
}

TEST_CASE("asymptotic EE bound") {
    const auto ch = gain_db(-110);
    // Independent evaluation: 1.80627031933685e9 bit/J.
    CHECK(ee_max_asymptotic(6.0, kHw, ch) == doctest::Approx(1.80627031933685e9).epsilon(1e-10));
    CHECK(ee_max_asymptotic(6.0, kHw, ch) > ee_max_asymptotic(5.0, kHw, ch));
    CHECK(ee_max_asymptotic(6.0, kHw, ch) > ee_max_asymptotic(7.0, kHw, ch));
    CHECK(ee_max_asymptotic(1e6, kHw, ch) < 1e-3 * ee_max_asymptotic(6.0, kHw, ch));

    // Golden-section over z of the B-normalized objective with mu, D0 dropped.
    const double m = 6.0;
    const auto normalized = [&](double z) {
        const double bits = std::log2(1.0 + m * ch.beta * z / kHw.n0);
        return bits / (z / kHw.kappa + kHw.nu * m + kHw.eta * bits);
    };
    const double z = eeopt::testing::golden_section_max_log(normalized, 1e-14, 1e-6);
    CHECK(ee_max_asymptotic(m, kHw, ch) == doctest::Approx(normalized(z)).epsilon(1e-9));
    CHECK(optimal_psd_ratio(m, kHw, ch).z_star == doctest::Approx(z).epsilon(1e-4));
}

TEST_CASE("best antenna count for the asymptotic bound") {
    CHECK(optimal_m_asymptotic(kHw, gain_db(-100), 512) == 2);
    CHECK(optimal_m_asymptotic(kHw, gain_db(-110), 512) == 6);
    CHECK(optimal_m_asymptotic(kHw, gain_db(-120), 512) == 20);
    CHECK(optimal_m_asymptotic(kHw, gain_db(-110), 1) == 1);
    CHECK(optimal_m_asymptotic(kHw, gain_db(-110), 4) == 4);
    CHECK_THROWS_AS(optimal_m_asymptotic(kHw, gain_db(-110), 0), DomainError);
    int prev = 0;
    for (double db = -90.0; db >= -140.0; db -= 2.5) {
        const int m = optimal_m_asymptotic(kHw, gain_db(db), 512);
        CHECK(m >= prev);
        prev = m;
    }
}

TEST_CASE("rate on the optimal ray") {
    CHECK(rate_at_optimal_ratio(1e9, std::numbers::ln2) == doctest::Approx(1e9).epsilon(1e-15));
    CHECK(rate_at_optimal_ratio(2e9, 1.3) == doctest::Approx(2.0 * rate_at_optimal_ratio(1e9, 1.3)));
    const double u = optimal_psd_ratio(6.0, kHw, gain_db(-110)).u;
    CHECK(rate_at_optimal_ratio(1e10, u) == doctest::Approx(2.24126100664164e10).epsilon(1e-10));
}

TEST_CASE("optimal power") {
    const auto ch = gain_db(-110);
    SUBCASE("W argument zero gives v = 1") {
        const HardwareProfile hw{.kappa = 0.5, .mu = 0.2, .d0 = 0.0, .nu = 0.0, .eta = 0.0, .n0 = 1e-20};
        // kappa M beta mu = B N0  ->  B = 0.5 * 2 * 1e-10 * 0.2 / 1e-20
        const double b = 0.5 * 2.0 * 1e-10 * 0.2 / 1e-20;
        const auto r = optimal_power(b, 2.0, hw, ChannelGain{1e-10});
        CHECK(r.v == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(r.p == doctest::Approx(b * hw.n0 * (std::numbers::e - 1.0) / (2.0 * 1e-10)).epsilon(1e-14));
    }
    SUBCASE("matches golden-section maximizer at B_max") {
        const double p = optimal_power(1e10, 6.0, kHw, ch).p;
        const double oracle = eeopt::testing::golden_section_max_log(
            [&](double x) { return ee_at(x, 1e10, 6.0, kHw, ch); }, 1e-9, 10.0);
        CHECK(rel_diff(p, oracle) < 1e-3);
        CHECK(p == doctest::Approx(2.5299618059694886).epsilon(1e-10));
    }
    SUBCASE("more circuit power pushes power up") {
        HardwareProfile hw = kHw;
        const double base = optimal_power(1e10, 6.0, hw, ch).p;
        hw.mu *= 10.0;
        CHECK(optimal_power(1e10, 6.0, hw, ch).p > base);
    }
    SUBCASE("stationary in P") {
        for (double b : {1e8, 1e9, 1e10, 1e11}) {
            for (double m : {1.0, 6.0, 64.0}) {
                const double p = optimal_power(b, m, kHw, ch).p;
                const double d = eeopt::testing::log_derivative([&](double x) { return ee_at(x, b, m, kHw, ch); }, p);
                CHECK(std::abs(d) < 1e-6);
            }
        }
    }
    SUBCASE("no circuit power is degenerate") {
        const HardwareProfile hw{.kappa = 0.4, .mu = 0.0, .d0 = 0.0, .nu = 0.0, .eta = 0.0, .n0 = kHw.n0};
        const auto r = optimal_power(1e10, 6.0, hw, ch);
        CHECK(r.degenerate);
        CHECK(r.p == 0.0);
    }
}

TEST_CASE("optimal antennas") {
    const auto ch = gain_db(-110);
    SUBCASE("W argument zero gives w = 1") {
        const HardwareProfile hw{.kappa = 0.5, .mu = 0.0, .d0 = 1.0, .nu = 0.0, .eta = 0.0, .n0 = 1e-20};
        // P beta (P/kappa) = B N0 D0 with P = 1, beta = 1e-10: B = 2e-10 / 1e-20
        const double b = 2e10;
        const auto r = optimal_antennas(b, 1.0, hw, ChannelGain{1e-10});
        CHECK(r.w == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(r.m == doctest::Approx(b * hw.n0 * (std::numbers::e - 1.0) / 1e-10).epsilon(1e-14));
    }
    SUBCASE("matches a dense real-valued scan") {
        const double m = optimal_antennas(1e10, 10.0, kHw, ch).m;
        double best_m = 1.0;
        double best = -1.0;
        for (int i = 0; i <= 511000; ++i) {
            const double x = 1.0 + i * 1e-3;
            const double v = ee_at(10.0, 1e10, x, kHw, ch);
            if (v > best) {
                best = v;
                best_m = x;
            }
        }
        CHECK(rel_diff(m, best_m) < 1e-3);
        CHECK(m == doctest::Approx(10.208511182836839).epsilon(1e-10));
    }
    SUBCASE("stationary in M") {
        for (double b : {1e8, 1e10}) {
            for (double p : {0.1, 1.0, 10.0}) {
                const double m = optimal_antennas(b, p, kHw, ch).m;
                const double d = eeopt::testing::log_derivative([&](double x) { return ee_at(p, b, x, kHw, ch); }, m);
                CHECK(std::abs(d) < 1e-6);
            }
        }
    }
    SUBCASE("strong channel gives an unclamped value below one") {
        const auto r = optimal_antennas(1e10, 0.1, kHw, gain_db(-60));
        CHECK(r.m < 1.0);
        CHECK(r.m > 0.0);
    }
    SUBCASE("no per-antenna power is a domain error") {
        HardwareProfile hw = kHw;
        hw.d0 = 0.0;
        hw.nu = 0.0;
        CHECK_THROWS_AS(optimal_antennas(1e10, 10.0, hw, ch), DomainError);
    }
}

TEST_CASE("power per antenna") {
    CHECK(power_per_antenna_ratio(1e10, kHw) == doctest::Approx(0.408).epsilon(1e-14));
    HardwareProfile hw = kHw;
    hw.nu = 0.0;
    CHECK(power_per_antenna_ratio(1e10, hw) == doctest::Approx(hw.kappa * hw.d0));
    hw = kHw;
    hw.kappa = 0.8;
    CHECK(power_per_antenna_ratio(1e10, hw) == doctest::Approx(2.0 * power_per_antenna_ratio(1e10, kHw)));
    hw = kHw;
    hw.eta = 1.0;
    hw.mu = 50.0;
    CHECK(power_per_antenna_ratio(1e10, hw) == power_per_antenna_ratio(1e10, kHw));
}

TEST_CASE("interior (P, M) fixed point satisfies P / kappa = (D0 + nu B) M") {
    const auto ch = gain_db(-110);
    for (double b : {1e8, 1e9, 1e10, 1e11}) {
        const auto fp = alternate_power_antennas(b, kHw, ch);
        CHECK(fp.iterations < 100);
        CHECK(rel_diff(fp.p / kHw.kappa, (kHw.d0 + kHw.nu * b) * fp.m) < 5e-3);
        CHECK(rel_diff(fp.p / fp.m, power_per_antenna_ratio(b, kHw)) < 1e-9);
    }
}

TEST_CASE("power maximizer approaches the optimal ratio as B grows") {
    const auto ch = gain_db(-110);
    const double z = optimal_psd_ratio(20.0, kHw, ch).z_star;
    const double gap12 = rel_diff(optimal_power(1e12, 20.0, kHw, ch).p / 1e12, z);
    const double gap14 = rel_diff(optimal_power(1e14, 20.0, kHw, ch).p / 1e14, z);
    CHECK(gap12 < 1e-2);
    CHECK(gap14 < gap12);
}

TEST_CASE("maximizers do not depend on eta") {
    const auto ch = gain_db(-110);
    HardwareProfile hw = kHw;
    hw.eta = 0.0;
    const double p0 = optimal_power(1e10, 6.0, hw, ch).p;
    const double m0 = optimal_antennas(1e10, 3.0, hw, ch).m;
    const double z0 = optimal_psd_ratio(6.0, hw, ch).z_star;
    for (double eta : {1e-11, 1e-9}) {
        hw.eta = eta;
        CHECK(optimal_power(1e10, 6.0, hw, ch).p == p0);
        CHECK(optimal_antennas(1e10, 3.0, hw, ch).m == m0);
        CHECK(optimal_psd_ratio(6.0, hw, ch).z_star == z0);
    }
}
