#pragma once

namespace eeopt {

inline constexpr double kLambertDefaultTol = 1e-12;
inline constexpr int kLambertMaxIterations = 100;

/// Principal branch W0 of the Lambert W function, x = W(x) e^{W(x)}.
///
/// Halley iteration until |w e^w - x| <= tol * max(1, |x|). Arguments within
/// 1e-14 of -1/e return exactly -1.
///
/// Throws DomainError for x < -1/e or non-finite x, ConvergenceError if the
/// iteration cap is reached.
double lambert_w0(double x, double tol = kLambertDefaultTol);

/// W0(e^log_x) without forming e^log_x, for arguments beyond double range.
double lambert_w0_of_exp(double log_x, double tol = kLambertDefaultTol);

/// 1 + W0((a - 1) / e) for a >= 0, given log(a).
///
/// Every closed-form maximizer in the library has this shape. Small a is
/// handled in the exponent variable so the result keeps full relative
/// precision near the branch point; huge a goes through lambert_w0_of_exp.
/// log_a = -inf (a = 0) returns 0.
double lambert_shifted_exponent(double log_a, double tol = kLambertDefaultTol);

}  // namespace eeopt
