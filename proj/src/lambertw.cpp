#include "eeopt/lambertw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "eeopt/error.hpp"

namespace eeopt {
namespace {

constexpr double kInvE = 1.0 / std::numbers::e;
constexpr double kBranchSnap = 1e-14;

double initial_guess(double x) {
    if (x < -0.25) {
        // Series about the branch point in p = sqrt(2(ex + 1)).
        const double p = std::sqrt(std::max(0.0, 2.0 * (std::numbers::e * x + 1.0)));
        return -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0)));
    }
    if (x <= std::numbers::e) {
        // Winitzki-style fit, within a few percent on [-0.25, e].
        const double l = std::log1p(x);
        return l * (1.0 - std::log1p(l) / (2.0 + l));
    }
    const double l1 = std::log(x);
    const double l2 = std::log(l1);
    return l1 - l2 + l2 / l1;
}

}  // namespace

double lambert_w0(double x, double tol) {
    if (!std::isfinite(x)) {
        throw DomainError("lambert_w0: argument must be finite", x);
    }
    if (x < -kInvE - kBranchSnap) {
        throw DomainError("lambert_w0: argument below the branch point -1/e", x);
    }
    if (std::abs(x + kInvE) <= kBranchSnap) {
        return -1.0;
    }
    if (x == 0.0) {
        return 0.0;
    }

    const double scale = std::max(1.0, std::abs(x));
    double w = initial_guess(x);
    for (int it = 0; it < kLambertMaxIterations; ++it) {
        const double ew = std::exp(w);
        const double f = w * ew - x;
        if (std::abs(f) <= tol * scale) {
            return w;
        }
        const double wp1 = w + 1.0;
        const double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        const double next = w - f / denom;
        if (next == w || !std::isfinite(next)) {
            break;
        }
        w = std::max(next, -1.0);
    }
    const double residual = std::abs(w * std::exp(w) - x);
    if (residual <= tol * scale) {
        return w;
    }
    throw ConvergenceError("lambert_w0: no convergence for x = " + format_number(x) +
                           ", residual " + format_number(residual));
}

double lambert_w0_of_exp(double log_x, double tol) {
    if (std::isnan(log_x)) {
        throw DomainError("lambert_w0_of_exp: NaN argument", log_x);
    }
    if (log_x < 700.0) {
        return lambert_w0(std::exp(log_x), tol);
    }
    if (std::isinf(log_x)) {
        return std::numeric_limits<double>::infinity();
    }
    // Newton on g(w) = w + log(w) - log_x, which is concave and increasing.
    double w = log_x - std::log(log_x);
    for (int it = 0; it < kLambertMaxIterations; ++it) {
        const double g = w + std::log(w) - log_x;
        const double step = g / (1.0 + 1.0 / w);
        w -= step;
        if (std::abs(step) <= tol * w) {
            return w;
        }
    }
    throw ConvergenceError("lambert_w0_of_exp: no convergence for log_x = " + format_number(log_x));
}

namespace {

// h(u) = u + log(1 - u) = -sum_{k>=2} u^k / k, evaluated without cancellation.
double h_small(double u) {
    double term = u;
    double sum = 0.0;
    for (int k = 2; k < 200; ++k) {
        term *= u;
        const double add = term / k;
        sum += add;
        if (add <= 1e-18 * sum) {
            break;
        }
    }
    return -sum;
}

double h(double u) { return u < 0.1 ? h_small(u) : u + std::log1p(-u); }

}  // namespace

double lambert_shifted_exponent(double log_a, double tol) {
    if (std::isnan(log_a)) {
        throw DomainError("lambert_shifted_exponent: NaN argument", log_a);
    }
    if (log_a == -std::numeric_limits<double>::infinity()) {
        return 0.0;
    }
    if (log_a > 700.0) {
        return lambert_w0_of_exp(log_a - 1.0, tol) + 1.0;
    }
    const double a = std::exp(log_a);
    if (a >= 0.25) {
        return lambert_w0((a - 1.0) * kInvE, tol) + 1.0;
    }
    // With u = W + 1, (u - 1) e^u = a - 1, i.e. h(u) = u + log(1 - u) = log(1 - a),
    // u in (0, 1). Newton from the branch-point series u ~ sqrt(2a).
    const double target = std::log1p(-a);
    double u = std::min(std::sqrt(2.0 * a) * (1.0 - std::sqrt(2.0 * a) / 3.0), 0.9);
    if (u <= 0.0) {
        return 0.0;
    }
    for (int it = 0; it < kLambertMaxIterations; ++it) {
        const double g = h(u) - target;
        const double slope = -u / (1.0 - u);
        const double step = g / slope;
        const double next = std::clamp(u - step, 0.5 * u, 0.5 * (u + 1.0));
        if (std::abs(next - u) <= tol * 1e-3 * u) {
            return next;
        }
        u = next;
    }
    throw ConvergenceError("lambert_shifted_exponent: no convergence for log_a = " +
                           format_number(log_a));
}

}  // namespace eeopt
