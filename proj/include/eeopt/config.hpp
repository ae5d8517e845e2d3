#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "eeopt/error.hpp"
#include "eeopt/model.hpp"

namespace eeopt::config {

/// Malformed configuration text, with 1-based position.
class ParseError : public Error {
public:
    ParseError(const std::string& what, int line, int column)
        : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
          line_(line), column_(column) {}

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

struct FixedPowerSplit {
    double p_fix_w = 0.0;
    double p_syn_w = 0.0;

    bool operator==(const FixedPowerSplit&) const = default;
};

/// User-facing configuration, in the units the keys name. Defaults are the
/// reference scenario: kappa 0.4, mu 100 mW, D0 20 mW, nu 1e-10 J/sample,
/// eta 1e-11 J/bit, N0 -174 dBm/Hz, beta -110 dB, P_max 40 dBm, B_max 10 GHz,
/// M_max 512, delta 0.1 bit/J.
struct RunConfig {
    double kappa = 0.4;
    double mu_w = 0.1;
    std::optional<FixedPowerSplit> mu_split;  ///< when given, mu_w is their sum
    double d0_w = 0.02;
    double nu_j_per_sample = 1e-10;
    double eta_j_per_bit = 1e-11;
    double n0_dbm_per_hz = -174.0;
    double beta_db = -110.0;
    double p_max_dbm = 40.0;
    double b_max_hz = 1e10;
    int m_max = 512;
    double delta_bit_per_j = 0.1;

    bool operator==(const RunConfig&) const = default;
};

struct Scenario {
    HardwareProfile hw;
    ChannelGain ch;
    Limits limits;
};

/// Parses flat `key = value` text. `#` starts a comment; blank lines are
/// ignored. Unknown and repeated keys are errors.
RunConfig parse_config(std::string_view text);

/// Applies a group of `key=value` overrides on top of `cfg`. The group obeys
/// the same rules as a document; setting mu_w alone drops any stored split.
/// ParseError line numbers index into the group.
RunConfig apply_overrides(RunConfig cfg, std::span<const std::string> assignments);

/// Canonical text form; parse_config(emit_config(c)) == c.
std::string emit_config(const RunConfig& cfg);

/// Validates against the domain invariants and converts to SI.
Scenario to_scenario(const RunConfig& cfg);

Scenario load_config(std::string_view text);

}  // namespace eeopt::config
