#include "eeopt/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <span>
#include <string>

#include "eeopt/units.hpp"

namespace eeopt::config {
namespace {

constexpr std::string_view kWhitespace = " \t\r";

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Position {
    int line = 1;
    int column = 1;
};

double parse_double(std::string_view text, const std::string& key, Position pos) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
        throw ParseError("value for '" + key + "' is not a finite number: '" + std::string(text) + "'",
                         pos.line, pos.column);
    }
    return v;
}

int parse_int(std::string_view text, const std::string& key, Position pos) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw ParseError("value for '" + key + "' is not an integer: '" + std::string(text) + "'",
                         pos.line, pos.column);
    }
    return v;
}

// Raw key/value pairs collected from one document, resolved together so that
// aliases and the mu split can be cross-checked.
class Assignments {
public:
    void add(std::string key, std::string_view value, Position key_pos, Position value_pos) {
        static const std::set<std::string, std::less<>> known = {
            "kappa",   "mu_w",          "p_fix_w",      "p_syn_w",    "d0_w",
            "nu_j_per_sample", "eta_j_per_bit", "n0_dbm_per_hz", "beta_db", "p_max_dbm",
            "b_max_hz", "b_max_ghz",    "m_max",        "delta_bit_per_j"};
        if (!known.contains(key)) {
            throw ParseError("unknown key '" + key + "'", key_pos.line, key_pos.column);
        }
        if (entries_.contains(key)) {
            throw ParseError("duplicate key '" + key + "'", key_pos.line, key_pos.column);
        }
        entries_.emplace(std::move(key), Entry{std::string(value), value_pos});
    }

    bool contains(std::string_view key) const { return entries_.contains(key); }

    void apply(RunConfig& cfg) const {
        const auto num = [&](const char* key, double& field) {
            if (auto it = entries_.find(key); it != entries_.end()) {
                field = parse_double(it->second.text, key, it->second.pos);
            }
        };
        num("kappa", cfg.kappa);
        num("d0_w", cfg.d0_w);
        num("nu_j_per_sample", cfg.nu_j_per_sample);
        num("eta_j_per_bit", cfg.eta_j_per_bit);
        num("n0_dbm_per_hz", cfg.n0_dbm_per_hz);
        num("beta_db", cfg.beta_db);
        num("p_max_dbm", cfg.p_max_dbm);
        num("delta_bit_per_j", cfg.delta_bit_per_j);

        if (auto it = entries_.find("m_max"); it != entries_.end()) {
            cfg.m_max = parse_int(it->second.text, "m_max", it->second.pos);
        }

        const bool hz = entries_.contains("b_max_hz");
        const bool ghz = entries_.contains("b_max_ghz");
        if (hz && ghz) {
            const Position pos = entries_.at("b_max_ghz").pos;
            throw ParseError("b_max_hz and b_max_ghz are aliases; give only one", pos.line, pos.column);
        }
        num("b_max_hz", cfg.b_max_hz);
        if (ghz) {
            double v = 0.0;
            num("b_max_ghz", v);
            cfg.b_max_hz = v * 1e9;
        }

        const bool has_fix = entries_.contains("p_fix_w");
        const bool has_syn = entries_.contains("p_syn_w");
        if (has_fix != has_syn) {
            const Position pos = entries_.at(has_fix ? "p_fix_w" : "p_syn_w").pos;
            throw ParseError("p_fix_w and p_syn_w must be given together", pos.line, pos.column);
        }
        if (has_fix) {
            FixedPowerSplit split;
            num("p_fix_w", split.p_fix_w);
            num("p_syn_w", split.p_syn_w);
            const double sum = split.p_fix_w + split.p_syn_w;
            if (auto it = entries_.find("mu_w"); it != entries_.end()) {
                const double mu = parse_double(it->second.text, "mu_w", it->second.pos);
                if (mu != sum) {
                    throw ValidationError("mu_w", fmt17(mu),
                                          "equal to p_fix_w + p_syn_w = " + fmt17(sum));
                }
            }
            cfg.mu_split = split;
            cfg.mu_w = sum;
        } else {
            num("mu_w", cfg.mu_w);
        }
    }

private:
    struct Entry {
        std::string text;
        Position pos;
    };
    std::map<std::string, Entry, std::less<>> entries_;
};

void parse_assignment(std::string_view line, int line_no, Assignments& out) {
    const auto first = line.find_first_not_of(kWhitespace);
    if (first == std::string_view::npos) {
        return;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
        throw ParseError("expected 'key = value'", line_no, static_cast<int>(first) + 1);
    }
    std::string_view key = line.substr(first, eq - first);
    key = key.substr(0, key.find_last_not_of(kWhitespace) + 1);
    if (key.empty()) {
        throw ParseError("missing key before '='", line_no, static_cast<int>(eq) + 1);
    }
    if (key.find_first_of(kWhitespace) != std::string_view::npos) {
        throw ParseError("key contains whitespace", line_no, static_cast<int>(first) + 1);
    }
    std::string_view rest = line.substr(eq + 1);
    const auto vstart = rest.find_first_not_of(kWhitespace);
    if (vstart == std::string_view::npos) {
        throw ParseError("missing value for '" + std::string(key) + "'", line_no,
                         static_cast<int>(line.size()) + 1);
    }
    std::string_view value = rest.substr(vstart);
    value = value.substr(0, value.find_last_not_of(kWhitespace) + 1);
    out.add(std::string(key), value, {line_no, static_cast<int>(first) + 1},
            {line_no, static_cast<int>(eq + 1 + vstart) + 1});
}

}  // namespace

RunConfig parse_config(std::string_view text) {
    Assignments assignments;
    int line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        parse_assignment(line, line_no, assignments);
    }
    RunConfig cfg;
    assignments.apply(cfg);
    return cfg;
}

RunConfig apply_overrides(RunConfig cfg, std::span<const std::string> assignments) {
    Assignments group;
    int index = 0;
    for (const auto& a : assignments) {
        parse_assignment(a, ++index, group);
    }
    if (group.contains("mu_w") && !group.contains("p_fix_w")) {
        cfg.mu_split.reset();
    }
    group.apply(cfg);
    return cfg;
}

std::string emit_config(const RunConfig& cfg) {
    std::string out;
    const auto line = [&out](const char* key, const std::string& value) {
        out += key;
        out += " = ";
        out += value;
        out += '\n';
    };
    line("kappa", fmt17(cfg.kappa));
    line("mu_w", fmt17(cfg.mu_w));
    if (cfg.mu_split) {
        line("p_fix_w", fmt17(cfg.mu_split->p_fix_w));
        line("p_syn_w", fmt17(cfg.mu_split->p_syn_w));
    }
    line("d0_w", fmt17(cfg.d0_w));
    line("nu_j_per_sample", fmt17(cfg.nu_j_per_sample));
    line("eta_j_per_bit", fmt17(cfg.eta_j_per_bit));
    line("n0_dbm_per_hz", fmt17(cfg.n0_dbm_per_hz));
    line("beta_db", fmt17(cfg.beta_db));
    line("p_max_dbm", fmt17(cfg.p_max_dbm));
    line("b_max_hz", fmt17(cfg.b_max_hz));
    line("m_max", std::to_string(cfg.m_max));
    line("delta_bit_per_j", fmt17(cfg.delta_bit_per_j));
    return out;
}

Scenario to_scenario(const RunConfig& cfg) {
    const auto require = [](bool ok, const char* key, double v, const char* constraint) {
        if (!ok) {
            throw ValidationError(key, fmt17(v), constraint);
        }
    };
    require(cfg.kappa > 0.0 && cfg.kappa <= 1.0, "kappa", cfg.kappa, "(0, 1]");
    require(cfg.mu_w >= 0.0, "mu_w", cfg.mu_w, ">= 0");
    if (cfg.mu_split) {
        require(cfg.mu_split->p_fix_w >= 0.0, "p_fix_w", cfg.mu_split->p_fix_w, ">= 0");
        require(cfg.mu_split->p_syn_w >= 0.0, "p_syn_w", cfg.mu_split->p_syn_w, ">= 0");
        require(cfg.mu_w == cfg.mu_split->p_fix_w + cfg.mu_split->p_syn_w, "mu_w", cfg.mu_w,
                "p_fix_w + p_syn_w");
    }
    require(cfg.d0_w >= 0.0, "d0_w", cfg.d0_w, ">= 0");
    require(cfg.nu_j_per_sample >= 0.0, "nu_j_per_sample", cfg.nu_j_per_sample, ">= 0");
    require(cfg.eta_j_per_bit >= 0.0, "eta_j_per_bit", cfg.eta_j_per_bit, ">= 0");
    require(cfg.b_max_hz > 0.0, "b_max_hz", cfg.b_max_hz, "> 0");
    require(cfg.m_max >= 1, "m_max", cfg.m_max, ">= 1");
    require(cfg.delta_bit_per_j > 0.0, "delta_bit_per_j", cfg.delta_bit_per_j, "> 0");

    Scenario s;
    s.hw = {
        .kappa = cfg.kappa,
        .mu = cfg.mu_w,
        .d0 = cfg.d0_w,
        .nu = cfg.nu_j_per_sample,
        .eta = cfg.eta_j_per_bit,
        .n0 = units::dbm_to_watt(cfg.n0_dbm_per_hz),
    };
    s.ch = ChannelGain::from_db(cfg.beta_db);
    s.limits = {
        .p_max = units::dbm_to_watt(cfg.p_max_dbm),
        .b_max = cfg.b_max_hz,
        .m_max = cfg.m_max,
        .delta = cfg.delta_bit_per_j,
    };
    // dB inputs can still underflow to zero or overflow.
    require(s.hw.n0 > 0.0 && std::isfinite(s.hw.n0), "n0_dbm_per_hz", cfg.n0_dbm_per_hz,
            "a positive finite noise density");
    require(s.ch.beta > 0.0 && std::isfinite(s.ch.beta), "beta_db", cfg.beta_db,
            "a positive finite gain");
    require(s.limits.p_max > 0.0 && std::isfinite(s.limits.p_max), "p_max_dbm", cfg.p_max_dbm,
            "a positive finite power");
    s.hw.validate();
    s.ch.validate();
    s.limits.validate();
    return s;
}

Scenario load_config(std::string_view text) { return to_scenario(parse_config(text)); }

}  // namespace eeopt::config
