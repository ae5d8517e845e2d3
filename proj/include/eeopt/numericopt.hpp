#pragma once

#include <optional>
#include <string>
#include <vector>

#include "eeopt/error.hpp"
#include "eeopt/model.hpp"

namespace eeopt::numericopt {

/// Bracketing and bisection settings for the bandwidth search.
struct BracketSearchConfig {
    double lower = 1e3;          ///< [Hz]
    double upper = 1e10;         ///< [Hz]
    double expansion = 10.0;
    int max_expansions = 12;
    double tolerance = 1e-12;    ///< relative width of the final bracket

    void validate() const;
};

class BracketError : public Error {
public:
    BracketError(const std::string& what, double lower, double upper)
        : Error(what + " (last bracket [" + format_number(lower) + ", " + format_number(upper) +
                "] Hz)"),
          lower_(lower), upper_(upper) {}

    double lower() const noexcept { return lower_; }
    double upper() const noexcept { return upper_; }

private:
    double lower_;
    double upper_;
};

/// The two sides of the bandwidth stationarity equation dEE/dB = 0:
///
///   (B N0/(M P beta) K + K) ln(1 + M P beta/(B N0)) = M kappa nu B + K,
///   K = kappa mu + D0 M kappa + P.
///
/// The left side is nonincreasing in B and the right side is affine, so
/// g = lhs - rhs has exactly one root when nu > 0.
struct StationarityTerms {
    double lhs = 0.0;
    double rhs = 0.0;

    double residual() const { return lhs - rhs; }
};

StationarityTerms bandwidth_stationarity(double b, double p, double m, const HardwareProfile& hw,
                                         const ChannelGain& ch);

/// Unique EE-maximizing bandwidth for fixed (P, M), by bisection on the sign
/// change of the stationarity residual in log(B). Not clamped to any limit.
///
/// Throws BracketError if no sign change is found within max_expansions.
double optimal_bandwidth(double p, double m, const HardwareProfile& hw, const ChannelGain& ch,
                         const BracketSearchConfig& cfg = {});

enum class Spacing { log, linear, integer };

/// One grid axis. A single-point axis requires lo == hi. Integer axes take
/// every integer in [lo, hi] when `points` covers the range.
struct Axis {
    double lo = 1.0;
    double hi = 1.0;
    int points = 1;
    Spacing spacing = Spacing::log;

    std::vector<double> values() const;
    void validate(const char* name) const;

    static Axis fixed(double v) { return {v, v, 1, Spacing::linear}; }
};

struct GridOracleConfig {
    Axis p;
    Axis b;
    Axis m;
    int refinement_rounds = 3;

    /// 50 x 50 log grid over [1e-6, 1] of P_max and B_max, every integer M up to
    /// M_max (or a 1024-point real grid above that).
    static GridOracleConfig defaults_for(const Limits& limits);
};

struct OracleResult {
    DesignPoint point;
    double ee = 0.0;
    long long evaluations = 0;
};

/// Refined exhaustive search. Each round evaluates the full grid with the
/// model's batch EE kernel, then shrinks every swept axis 10x around the
/// incumbent (clipped to the original range). No closed forms are used.
OracleResult brute_force_optimum(const HardwareProfile& hw, const ChannelGain& ch,
                                 const Limits& limits, const GridOracleConfig& cfg);

struct SurfaceRow {
    double p = 0.0;
    double b = 0.0;
    double m = 0.0;
    double ee = 0.0;
};

/// Values pinned for the axes that are not swept.
struct FixedAxes {
    std::optional<double> p;
    std::optional<double> b;
    std::optional<double> m;
    /// Tie P to B through the optimal P/B ratio at each row's M.
    bool p_at_optimal_ratio = false;
};

/// EE over the cartesian product of the swept axes. Row order is lexicographic
/// in (p, b, m) index with m varying fastest.
///
/// An axis is swept iff it has no fixed value; a fixed axis must not also
/// carry more than one grid point.
std::vector<SurfaceRow> ee_surface(const GridOracleConfig& axes, const HardwareProfile& hw,
                                   const ChannelGain& ch, const FixedAxes& fixed);

}  // namespace eeopt::numericopt
