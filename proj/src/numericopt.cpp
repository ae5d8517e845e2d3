#include "eeopt/numericopt.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "eeopt/closedform.hpp"
#include "eeopt/error.hpp"

namespace eeopt::numericopt {

void BracketSearchConfig::validate() const {
    if (!(lower > 0.0 && lower < upper && std::isfinite(upper))) {
        throw ValidationError("bracket", "[" + format_number(lower) + ", " + format_number(upper) + "]",
                              "0 < lower < upper");
    }
    if (!(expansion > 1.0)) {
        throw ValidationError("expansion", format_number(expansion), "> 1");
    }
    if (max_expansions < 0) {
        throw ValidationError("max_expansions", std::to_string(max_expansions), ">= 0");
    }
    if (!(tolerance > 0.0 && tolerance <= 1e-3)) {
        throw ValidationError("tolerance", format_number(tolerance), "(0, 1e-3]");
    }
}

StationarityTerms bandwidth_stationarity(double b, double p, double m, const HardwareProfile& hw,
                                         const ChannelGain& ch) {
    const double k = hw.kappa * hw.mu + hw.d0 * m * hw.kappa + p;
    const double x = m * p * ch.beta / (b * hw.n0);
    return {
        .lhs = (b * hw.n0 / (m * p * ch.beta) * k + k) * std::log1p(x),
        .rhs = m * hw.kappa * hw.nu * b + k,
    };
}

double optimal_bandwidth(double p, double m, const HardwareProfile& hw, const ChannelGain& ch,
                         const BracketSearchConfig& cfg) {
    cfg.validate();
    const auto g = [&](double b) { return bandwidth_stationarity(b, p, m, hw, ch).residual(); };

    double lo = cfg.lower;
    double hi = cfg.upper;
    double g_lo = g(lo);
    double g_hi = g(hi);
    int expansions = 0;
    while (g_lo <= 0.0) {
        if (g_lo == 0.0) {
            return lo;
        }
        if (++expansions > cfg.max_expansions) {
            throw BracketError("optimal_bandwidth: no sign change below the bracket", lo, hi);
        }
        hi = lo;
        g_hi = g_lo;
        lo /= cfg.expansion;
        g_lo = g(lo);
    }
    while (g_hi >= 0.0) {
        if (g_hi == 0.0) {
            return hi;
        }
        if (++expansions > cfg.max_expansions) {
            throw BracketError("optimal_bandwidth: no sign change above the bracket", lo, hi);
        }
        lo = hi;
        g_lo = g_hi;
        hi *= cfg.expansion;
        g_hi = g(hi);
    }
    if (!(g_lo > 0.0 && g_hi < 0.0)) {
        throw BracketError("optimal_bandwidth: bracket lost its sign change", lo, hi);
    }

    double mid = std::sqrt(lo * hi);
    while (hi / lo - 1.0 > cfg.tolerance) {
        mid = std::sqrt(lo * hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        const double g_mid = g(mid);
        if (g_mid > 0.0) {
            lo = mid;
        } else if (g_mid < 0.0) {
            hi = mid;
        } else {
            return mid;
        }
    }

    // The final bracket is narrower than any EE feature; keep whichever end is best.
    double best = mid;
    double best_ee = model::energy_efficiency({p, mid, m}, hw, ch);
    for (double cand : {lo, hi}) {
        const double ee = model::energy_efficiency({p, cand, m}, hw, ch);
        if (ee > best_ee) {
            best = cand;
            best_ee = ee;
        }
    }
    return best;
}

std::vector<double> Axis::values() const {
    std::vector<double> out;
    if (points <= 1) {
        out.push_back(lo);
        return out;
    }
    switch (spacing) {
        case Spacing::log: {
            const double span = std::log(hi / lo);
            for (int i = 0; i < points; ++i) {
                out.push_back(lo * std::exp(span * i / (points - 1)));
            }
            out.back() = hi;
            break;
        }
        case Spacing::linear:
            for (int i = 0; i < points; ++i) {
                out.push_back(lo + (hi - lo) * i / (points - 1));
            }
            out.back() = hi;
            break;
        case Spacing::integer: {
            const double first = std::ceil(lo);
            const double last = std::floor(hi);
            const int count = static_cast<int>(last - first) + 1;
            if (points >= count) {
                for (double v = first; v <= last; v += 1.0) {
                    out.push_back(v);
                }
            } else {
                for (int i = 0; i < points; ++i) {
                    const double v = std::round(first + (last - first) * i / (points - 1));
                    if (out.empty() || v != out.back()) {
                        out.push_back(v);
                    }
                }
            }
            break;
        }
    }
    return out;
}

void Axis::validate(const char* name) const {
    const std::string key = std::string("axis ") + name;
    if (points < 1) {
        throw ValidationError(key + ".points", std::to_string(points), ">= 1");
    }
    if (!(std::isfinite(lo) && std::isfinite(hi) && lo <= hi)) {
        throw ValidationError(key, "[" + format_number(lo) + ", " + format_number(hi) + "]",
                              "finite lo <= hi");
    }
    if (points == 1 && lo != hi) {
        throw ValidationError(key + ".points", "1", "lo == hi for a single-point axis");
    }
    if (spacing == Spacing::log && !(lo > 0.0)) {
        throw ValidationError(key + ".lo", format_number(lo), "> 0 on a log axis");
    }
    if (spacing == Spacing::integer && std::floor(hi) < std::ceil(lo)) {
        throw ValidationError(key, "[" + format_number(lo) + ", " + format_number(hi) + "]",
                              "contains an integer");
    }
}

GridOracleConfig GridOracleConfig::defaults_for(const Limits& limits) {
    GridOracleConfig cfg;
    cfg.p = {limits.p_max * 1e-6, limits.p_max, 50, Spacing::log};
    cfg.b = {limits.b_max * 1e-6, limits.b_max, 50, Spacing::log};
    if (limits.m_max <= 1024) {
        cfg.m = {1.0, static_cast<double>(limits.m_max), limits.m_max, Spacing::integer};
    } else {
        cfg.m = {1.0, static_cast<double>(limits.m_max), 1024, Spacing::log};
    }
    cfg.refinement_rounds = 3;
    return cfg;
}

namespace {

Axis zoom(const Axis& current, const Axis& original, double incumbent) {
    if (current.points <= 1) {
        return current;
    }
    Axis next = current;
    switch (current.spacing) {
        case Spacing::log: {
            const double half = std::log(current.hi / current.lo) / 20.0;
            next.lo = std::max(original.lo, incumbent * std::exp(-half));
            next.hi = std::min(original.hi, incumbent * std::exp(half));
            break;
        }
        case Spacing::linear: {
            const double half = (current.hi - current.lo) / 20.0;
            next.lo = std::max(original.lo, incumbent - half);
            next.hi = std::min(original.hi, incumbent + half);
            break;
        }
        case Spacing::integer: {
            const double half = std::max(1.0, std::round((current.hi - current.lo) / 20.0));
            next.lo = std::max(std::ceil(original.lo), incumbent - half);
            next.hi = std::min(std::floor(original.hi), incumbent + half);
            break;
        }
    }
    if (next.lo >= next.hi) {
        next.lo = next.hi = incumbent;
        next.points = 1;
    }
    return next;
}

void check_within(const Axis& axis, double lo_bound, double hi_bound, const char* name) {
    if (axis.lo < lo_bound || axis.hi > hi_bound) {
        throw ValidationError(std::string("axis ") + name,
                              "[" + format_number(axis.lo) + ", " + format_number(axis.hi) + "]",
                              "within limits [" + format_number(lo_bound) + ", " +
                                  format_number(hi_bound) + "]");
    }
}

}  // namespace

OracleResult brute_force_optimum(const HardwareProfile& hw, const ChannelGain& ch,
                                 const Limits& limits, const GridOracleConfig& cfg) {
    hw.validate();
    ch.validate();
    limits.validate();
    cfg.p.validate("p");
    cfg.b.validate("b");
    cfg.m.validate("m");
    check_within(cfg.p, 0.0, limits.p_max, "p");
    check_within(cfg.b, 0.0, limits.b_max, "b");
    check_within(cfg.m, 0.0, limits.m_max, "m");
    if (!(cfg.p.lo > 0.0 && cfg.b.lo > 0.0 && cfg.m.lo > 0.0)) {
        throw ValidationError("grid", "lower edge 0", "strictly positive axes");
    }

    OracleResult best;
    best.ee = -1.0;
    Axis ap = cfg.p;
    Axis ab = cfg.b;
    Axis am = cfg.m;

    std::vector<double> pp;
    std::vector<double> bb;
    std::vector<double> mm;
    std::vector<double> ee;
    for (int round = 0; round <= cfg.refinement_rounds; ++round) {
        const auto pv = ap.values();
        const auto bv = ab.values();
        const auto mv = am.values();
        const std::size_t slab = bv.size() * mv.size();
        pp.resize(slab);
        bb.resize(slab);
        mm.resize(slab);
        ee.resize(slab);
        for (double p : pv) {
            std::size_t k = 0;
            for (double b : bv) {
                for (double m : mv) {
                    pp[k] = p;
                    bb[k] = b;
                    mm[k] = m;
                    ++k;
                }
            }
            model::energy_efficiency_batch(pp, bb, mm, hw, ch, ee);
            for (std::size_t i = 0; i < slab; ++i) {
                if (ee[i] > best.ee) {
                    best.ee = ee[i];
                    best.point = {pp[i], bb[i], mm[i]};
                }
            }
            best.evaluations += static_cast<long long>(slab);
        }
        if (round == cfg.refinement_rounds) {
            break;
        }
        ap = zoom(ap, cfg.p, best.point.p);
        ab = zoom(ab, cfg.b, best.point.b);
        am = zoom(am, cfg.m, best.point.m);
    }
    return best;
}

std::vector<SurfaceRow> ee_surface(const GridOracleConfig& axes, const HardwareProfile& hw,
                                   const ChannelGain& ch, const FixedAxes& fixed) {
    hw.validate();
    ch.validate();
    const auto resolve = [](const Axis& axis, const std::optional<double>& pinned, const char* name) {
        if (!pinned) {
            axis.validate(name);
            return axis.values();
        }
        if (axis.points > 1) {
            throw ValidationError(std::string("axis ") + name, "swept", "not both fixed and swept");
        }
        return std::vector<double>{*pinned};
    };
    if (fixed.p_at_optimal_ratio && fixed.p) {
        throw ValidationError("axis p", "fixed", "not both fixed and tied to the optimal ratio");
    }

    // With the ratio tie, P is a function of (B, M) and contributes a single slot.
    const auto pv = fixed.p_at_optimal_ratio ? std::vector<double>{0.0} : resolve(axes.p, fixed.p, "p");
    const auto bv = resolve(axes.b, fixed.b, "b");
    const auto mv = resolve(axes.m, fixed.m, "m");

    std::vector<double> z_by_m;
    if (fixed.p_at_optimal_ratio) {
        for (double m : mv) {
            z_by_m.push_back(closedform::optimal_psd_ratio(m, hw, ch).z_star);
        }
    }

    const std::size_t n = pv.size() * bv.size() * mv.size();
    std::vector<double> pp(n);
    std::vector<double> bb(n);
    std::vector<double> mm(n);
    std::size_t k = 0;
    for (double p : pv) {
        for (double b : bv) {
            for (std::size_t j = 0; j < mv.size(); ++j) {
                pp[k] = fixed.p_at_optimal_ratio ? z_by_m[j] * b : p;
                bb[k] = b;
                mm[k] = mv[j];
                ++k;
            }
        }
    }
    std::vector<double> ee(n);
    model::energy_efficiency_batch(pp, bb, mm, hw, ch, ee);

    std::vector<SurfaceRow> rows(n);
    for (std::size_t i = 0; i < n; ++i) {
        rows[i] = {pp[i], bb[i], mm[i], ee[i]};
    }
    return rows;
}

}  // namespace eeopt::numericopt
