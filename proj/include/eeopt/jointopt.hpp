#pragma once

#include <array>
#include <string>
#include <vector>

#include "eeopt/error.hpp"
#include "eeopt/model.hpp"
#include "eeopt/numericopt.hpp"

namespace eeopt::jointopt {

struct TraceEntry {
    int iteration = 0;
    double p = 0.0;
    double b = 0.0;
    double m = 0.0;
    double ee = 0.0;
};

struct ActiveConstraints {
    bool p_max = false;
    bool b_max = false;
    bool m_max = false;
};

/// Which branch of the (P, B) step won.
enum class Branch { power_at_max, bandwidth_at_max };

/// One integer-M candidate considered by the finalization step.
struct Candidate {
    DesignPoint point;
    double ee = 0.0;
    Branch branch = Branch::power_at_max;
};

struct OptimizationResult {
    DesignPoint point;  ///< finalized, integer m
    double ee = 0.0;    ///< [bit/J]
    double cap = 0.0;   ///< [bit/s]
    double snr_db = 0.0;
    ActiveConstraints active;
    Branch branch = Branch::power_at_max;
    std::vector<TraceEntry> trace;

    /// Last iterate of the continuous-M ascent, before finalization.
    DesignPoint continuous;
    /// floor(M) and ceil(M) candidates; identical when M is already integral.
    std::array<Candidate, 2> candidates;
    std::vector<std::string> warnings;
};

struct JointOptions {
    int max_iterations = 1000;
    /// Relative-improvement floor in addition to the absolute delta.
    double rel_tolerance = 1e-10;
    numericopt::BracketSearchConfig bracket;  ///< upper is replaced by B_max
};

/// Failure to converge within max_iterations; carries the trace so far.
class JointConvergenceError : public ConvergenceError {
public:
    JointConvergenceError(const std::string& what, std::vector<TraceEntry> trace)
        : ConvergenceError(what), trace_(std::move(trace)) {}

    const std::vector<TraceEntry>& trace() const noexcept { return trace_; }

private:
    std::vector<TraceEntry> trace_;
};

/// Best (P, B) on the boundary P = P_max or B = B_max at fixed M: the power
/// maximizer at B_max against the bandwidth maximizer at P_max, each clamped.
/// Ties prefer the P = P_max branch.
Candidate best_power_bandwidth(double m, const HardwareProfile& hw, const ChannelGain& ch,
                               const Limits& limits, const JointOptions& opts = {});

/// Constrained joint EE maximization over (P, B, M).
///
/// Alternates the boundary (P, B) choice with the closed-form antenna update
/// (clamped to [1, M_max]) until the EE gain is at most limits.delta or the
/// relative gain is at most opts.rel_tolerance, then compares floor(M) and
/// ceil(M) with re-optimized (P, B).
OptimizationResult joint_optimize(const HardwareProfile& hw, const ChannelGain& ch,
                                  const Limits& limits, const JointOptions& opts = {});

enum class Regime { power_limited, bandwidth_limited, both };

struct BoundaryReport {
    Regime regime = Regime::both;
    std::string label;
    /// (P / M) / (kappa (D0 + nu B)) - 1 at the returned point.
    double ratio_gap = 0.0;
    std::string text;
};

BoundaryReport boundary_diagnosis(const OptimizationResult& result, const HardwareProfile& hw);

}  // namespace eeopt::jointopt
