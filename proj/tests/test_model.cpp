#include <doctest.h>

#include <cmath>
#include <random>

#include "eeopt/error.hpp"
#include "eeopt/model.hpp"
#include "support/oracles.hpp"

using namespace eeopt;
using eeopt::testing::rel_diff;

namespace {

const HardwareProfile kHw = HardwareProfile::reference();
const ChannelGain kCh = ChannelGain::reference();

}  // namespace

TEST_CASE("reference defaults") {
    CHECK(kHw.kappa == 0.4);
    CHECK(kHw.mu == 0.1);
    CHECK(kHw.d0 == 0.02);
    CHECK(kHw.nu == 1e-10);
    CHECK(kHw.eta == 1e-11);
    CHECK(rel_diff(kHw.n0, std::pow(10.0, -20.4)) < 1e-15);
    CHECK(rel_diff(kCh.beta, 1e-11) < 1e-15);
    CHECK(Limits::reference().p_max == 10.0);
    CHECK(Limits::reference().b_max == 1e10);
    CHECK(Limits::reference().m_max == 512);
}

TEST_CASE("snr") {
    SUBCASE("unity when M P beta = B N0") {
        const HardwareProfile hw{.n0 = 2e-20};
        const ChannelGain ch{1e-11};
        const double b = 1e9;
        CHECK(model::snr({b * hw.n0 / ch.beta, b, 1.0}, hw, ch) == doctest::Approx(1.0).epsilon(1e-15));
    }
    SUBCASE("reference point") {
        // M P beta / (B N0) with M=6, P=1 W, B=10 GHz, beta=1e-11, N0=10^-20.4.
        CHECK(model::snr({1.0, 1e10, 6.0}, kHw, kCh) == doctest::Approx(1.507131858905743).epsilon(1e-12));
    }
    SUBCASE("invariant under joint P, B scaling") {
        const double a = model::snr({1.0, 1e10, 6.0}, kHw, kCh);
        CHECK(model::snr({2.0, 2e10, 6.0}, kHw, kCh) == doctest::Approx(a).epsilon(1e-15));
    }
}

TEST_CASE("capacity") {
    const HardwareProfile hw{.n0 = 1e-20};
    const ChannelGain ch{1e-11};
    CHECK(model::capacity({1e9 * hw.n0 / ch.beta, 1e9, 1.0}, hw, ch) == doctest::Approx(1e9).epsilon(1e-14));
    CHECK(model::capacity({1e-300, 1e9, 1.0}, hw, ch) < 1e-200);
    CHECK(model::capacity({1.0, 1e10, 6.0}, kHw, kCh) == doctest::Approx(1.3260378745870234e10).epsilon(1e-12));
}

TEST_CASE("power consumption") {
    SUBCASE("term arithmetic without coding power") {
        HardwareProfile hw = kHw;
        hw.eta = 0.0;
        // 0.4/0.4 + 0.1 + (0.02 + 1e-10 * 1e10) * 6
        CHECK(model::power_consumption({0.4, 1e10, 6.0}, hw, kCh) == doctest::Approx(7.22).epsilon(1e-14));
    }
    SUBCASE("amplifier term only") {
        const HardwareProfile hw{.kappa = 0.25, .mu = 0.0, .d0 = 0.0, .nu = 0.0, .eta = 0.0, .n0 = 1e-20};
        CHECK(model::power_consumption({0.25 * 3.0, 1e9, 4.0}, hw, kCh) == doctest::Approx(3.0).epsilon(1e-15));
    }
    SUBCASE("equals the sum of its terms") {
        const DesignPoint dp{1.0, 1e10, 6.0};
        const auto parts = model::power_breakdown(dp, kHw, kCh);
        CHECK(parts.amplifier == doctest::Approx(2.5));
        CHECK(parts.fixed == 0.1);
        CHECK(parts.chains == doctest::Approx(0.12));
        CHECK(parts.processing == doctest::Approx(6.0));
        CHECK(parts.coding == doctest::Approx(1e-11 * 1.3260378745870234e10));
        CHECK(model::power_consumption(dp, kHw, kCh) == doctest::Approx(parts.total()).epsilon(1e-14));
        CHECK(parts.total() == doctest::Approx(8.852603787458703).epsilon(1e-12));
    }
}

TEST_CASE("energy efficiency limits") {
    CHECK(model::energy_efficiency({1e-300, 1e10, 6.0}, kHw, kCh) < 1e-200);
    const double moderate = model::energy_efficiency({1.0, 1e10, 6.0}, kHw, kCh);
    CHECK(moderate == doctest::Approx(1.4979071767174232e9).epsilon(1e-12));
    CHECK(model::energy_efficiency({1.0, 1e22, 6.0}, kHw, kCh) < 1e-3 * moderate);
}

TEST_CASE("EE * PC == capacity on random points") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 2000; ++i) {
        const DesignPoint dp{std::pow(10.0, 2.0 * u(rng)), std::pow(10.0, 9.0 + 3.0 * u(rng)),
                             1.0 + 255.0 * (u(rng) + 1.0)};
        const double ee = model::energy_efficiency(dp, kHw, kCh);
        CHECK(rel_diff(ee * model::power_consumption(dp, kHw, kCh), model::capacity(dp, kHw, kCh)) < 1e-12);
    }
}

TEST_CASE("capacity monotone in P and M") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double p1 = std::pow(10.0, -3.0 + 5.0 * u(rng));
        const double p2 = std::pow(10.0, -3.0 + 5.0 * u(rng));
        const double m1 = 1.0 + 511.0 * u(rng);
        const double m2 = 1.0 + 511.0 * u(rng);
        const double b = std::pow(10.0, 8.0 + 3.0 * u(rng));
        const auto c = [&](double p, double m) { return model::capacity({p, b, m}, kHw, kCh); };
        if (p1 < p2) CHECK(c(p1, m1) <= c(p2, m1));
        if (m1 < m2) CHECK(c(p1, m1) <= c(p1, m2));
    }
}

TEST_CASE("EE is invariant to a consistent W -> mW rescaling") {
    // Expressing every power in mW multiplies power-like quantities by 1e3 and
    // EE (bit/J) by 1e-3; the rescaled EE converted back must match.
    const DesignPoint dp{1.0, 1e10, 6.0};
    HardwareProfile mw = kHw;
    mw.mu *= 1e3;
    mw.d0 *= 1e3;
    mw.nu *= 1e3;
    mw.eta *= 1e3;
    mw.n0 *= 1e3;
    const DesignPoint dp_mw{dp.p * 1e3, dp.b, dp.m};
    CHECK(model::energy_efficiency(dp_mw, mw, kCh) * 1e3 ==
          doctest::Approx(model::energy_efficiency(dp, kHw, kCh)).epsilon(1e-13));
}

TEST_CASE("channel gain dB round trip") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> db(-200.0, 50.0);
    for (int i = 0; i < 1000; ++i) {
        const ChannelGain g = ChannelGain::from_db(db(rng));
        CHECK(rel_diff(ChannelGain::from_db(g.to_db()).beta, g.beta) < 1e-12);
    }
    CHECK(ChannelGain::from_db(-100.0).beta == doctest::Approx(1e-10).epsilon(1e-15));
}

TEST_CASE("validation") {
    HardwareProfile hw = kHw;
    hw.kappa = 1.5;
    CHECK_THROWS_AS(hw.validate(), ValidationError);
    hw.kappa = 1.0;
    CHECK_NOTHROW(hw.validate());
    hw.n0 = 0.0;
    CHECK_THROWS_AS(hw.validate(), ValidationError);
    CHECK_THROWS_AS((ChannelGain{0.0}.validate()), ValidationError);
    CHECK_THROWS_AS((DesignPoint{1.0, 0.0, 1.0}.validate()), ValidationError);
    Limits lim;
    lim.delta = 0.0;
    CHECK_THROWS_AS(lim.validate(), ValidationError);
    CHECK((DesignPoint{1.0, 1.0, 3.0}.has_integer_m()));
    CHECK_FALSE((DesignPoint{1.0, 1.0, 3.5}.has_integer_m()));
    try {
        HardwareProfile bad = kHw;
        bad.kappa = 2.0;
        bad.validate();
    } catch (const ValidationError& e) {
        CHECK(e.key() == "kappa");
        CHECK(e.constraint() == "(0, 1]");
    }
}
