#pragma once

// Test-only reference methods. None of these call into the closed forms or
// the bisection code they are used to check.

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "eeopt/model.hpp"

namespace eeopt::testing {

/// Plain Newton on w e^w - x in long double, from w = log1p(x).
inline double newton_lambert(double x) {
    long double w = std::log1p(static_cast<long double>(x));
    for (int i = 0; i < 200; ++i) {
        const long double ew = std::exp(w);
        const long double step = (w * ew - x) / (ew * (w + 1.0L));
        w -= step;
        if (std::fabs(step) < 1e-19L) {
            break;
        }
    }
    return static_cast<double>(w);
}

/// Golden-section maximization of a unimodal f over log(x) in [lo, hi].
inline double golden_section_max_log(const std::function<double(double)>& f, double lo, double hi,
                                     double rel_tol = 1e-10) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = std::log(lo);
    double b = std::log(hi);
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(std::exp(c));
    double fd = f(std::exp(d));
    while (b - a > rel_tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(std::exp(c));
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(std::exp(d));
        }
    }
    return std::exp(0.5 * (a + b));
}

/// Argmax over n log-spaced points in [lo, hi].
inline double scan_max_log(const std::function<double(double)>& f, double lo, double hi, int n) {
    double best_x = lo;
    double best = -1.0;
    for (int i = 0; i < n; ++i) {
        const double x = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
        const double v = f(x);
        if (v > best) {
            best = v;
            best_x = x;
        }
    }
    return best_x;
}

/// Centered difference (df/dx) * x / f at x with relative step h.
inline double log_derivative(const std::function<double(double)>& f, double x, double h = 1e-6) {
    return (f(x * (1.0 + h)) - f(x * (1.0 - h))) / (2.0 * h * f(x));
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::abs(b); }

struct RandomProfile {
    HardwareProfile hw;
    ChannelGain ch;
};

/// Log-uniform within +-2 decades of each reference constant; kappa is
/// truncated to (0, 1].
inline RandomProfile random_profile(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> decades(-2.0, 2.0);
    const auto draw = [&](double center) { return center * std::pow(10.0, decades(rng)); };
    const HardwareProfile ref = HardwareProfile::reference();
    RandomProfile r;
    r.hw.kappa = std::min(1.0, draw(ref.kappa));
    r.hw.mu = draw(ref.mu);
    r.hw.d0 = draw(ref.d0);
    r.hw.nu = draw(ref.nu);
    r.hw.eta = draw(ref.eta);
    r.hw.n0 = ref.n0;
    r.ch.beta = draw(ChannelGain::reference().beta);
    return r;
}

}  // namespace eeopt::testing
