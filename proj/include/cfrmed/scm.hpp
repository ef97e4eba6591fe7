#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "cfrmed/cohort.hpp"
#include "cfrmed/effects.hpp"
#include "cfrmed/errors.hpp"
#include "cfrmed/io.hpp"
#include "cfrmed/rng.hpp"

namespace cfrmed::scm {

/// Three-variable mediation model with binary treatment T, k-level mediator
/// X and binary outcome Y: T -> X -> Y plus T -> Y. Mechanism tables are the
/// conditionals; the exogenous realization is inverse-transform over
/// independent uniforms (u_x for X, u_y for Y), which pins down every
/// counterfactual.
struct DiscreteScm {
    std::size_t mediator_arity = 0;
    std::array<std::vector<double>, 2> p_mediator;  // P(X = x | T = t), row-stochastic
    std::array<std::vector<double>, 2> p_outcome;   // P(Y = 1 | T = t, X = x)

    void validate() const {
        if (mediator_arity < 1) throw InvalidScmError("mediator arity must be >= 1");
        for (int t = 0; t < 2; ++t) {
            if (p_mediator[t].size() != mediator_arity || p_outcome[t].size() != mediator_arity)
                throw InvalidScmError("table sizes do not match mediator arity");
            double row = 0.0;
            for (double v : p_mediator[t]) {
                if (!(v >= 0.0 && v <= 1.0)) throw InvalidScmError("mediator probability out of [0,1]");
                row += v;
            }
            if (std::abs(row - 1.0) > 1e-12) throw InvalidScmError("mediator row does not sum to 1");
            for (double v : p_outcome[t])
                if (!(v >= 0.0 && v <= 1.0)) throw InvalidScmError("outcome probability out of [0,1]");
        }
    }
};

/// Exact effect tuple of one model.
struct ScmEffects {
    double tce = 0.0;
    std::vector<double> cde;  // per mediator level
    double nde = 0.0;
    double nie = 0.0;
};

namespace detail {

// Joint enumeration grid over the exogenous noise (u_x, u_y). Each u_x cell
// fixes the counterfactual mediator pair (X(0), X(1)); each u_y cell fixes
// every Y(t, x) simultaneously. Probability-weighted sums over the grid are
// therefore exact counterfactual expectations, with no appeal to the
// observational mediation formulas.
struct NoiseGrid {
    struct XCell {
        double length;
        std::size_t x0;  // f_X(0, u_x) on this cell
        std::size_t x1;  // f_X(1, u_x)
    };
    struct YCell {
        double length;
        double upper;  // Y(t,x) = 1 iff upper <= p_outcome[t][x]
    };
    std::vector<XCell> x_cells;
    std::vector<YCell> y_cells;
};

inline NoiseGrid build_grid(const DiscreteScm& m) {
    NoiseGrid grid;
    const std::size_t k = m.mediator_arity;
    std::array<std::vector<double>, 2> cum;
    for (int t = 0; t < 2; ++t) {
        cum[t].resize(k);
        double acc = 0.0;
        for (std::size_t x = 0; x < k; ++x) {
            acc += m.p_mediator[t][x];
            cum[t][x] = acc;
        }
        cum[t][k - 1] = 1.0;  // absorb the last rounding sliver
    }
    std::size_t i0 = 0, i1 = 0;
    double lower = 0.0;
    while (i0 < k && i1 < k) {
        double upper = std::min(cum[0][i0], cum[1][i1]);
        if (upper > lower) grid.x_cells.push_back({upper - lower, i0, i1});
        if (cum[0][i0] == upper) ++i0;
        if (i1 < k && cum[1][i1] == upper) ++i1;
        lower = upper;
    }

    std::vector<double> breaks;
    for (int t = 0; t < 2; ++t)
        for (double v : m.p_outcome[t]) breaks.push_back(v);
    breaks.push_back(1.0);
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    double y_lower = 0.0;
    for (double b : breaks) {
        if (b > y_lower) grid.y_cells.push_back({b - y_lower, b});
        y_lower = b;
    }
    return grid;
}

} // namespace detail

/// Interventional and counterfactual effects computed by enumerating the
/// exogenous noise grid.
inline ScmEffects exact_effects(const DiscreteScm& m) {
    m.validate();
    detail::NoiseGrid grid = detail::build_grid(m);

    // E[Y | do(T=t)], E[Y_{X(0)} | do(T=1)], E[Y_{X(1)} | do(T=0)]
    double e_do0 = 0.0, e_do1 = 0.0, e_cf_nde = 0.0, e_cf_nie = 0.0;
    for (const auto& xc : grid.x_cells) {
        for (const auto& yc : grid.y_cells) {
            const double w = xc.length * yc.length;
            const int y_do0 = yc.upper <= m.p_outcome[0][xc.x0] ? 1 : 0;
            const int y_do1 = yc.upper <= m.p_outcome[1][xc.x1] ? 1 : 0;
            const int y_nde = yc.upper <= m.p_outcome[1][xc.x0] ? 1 : 0;  // do(T=1), mediator held at X(0)
            const int y_nie = yc.upper <= m.p_outcome[0][xc.x1] ? 1 : 0;  // do(T=0), mediator moved to X(1)
            if (y_do0) e_do0 += w;
            if (y_do1) e_do1 += w;
            if (y_nde) e_cf_nde += w;
            if (y_nie) e_cf_nie += w;
        }
    }

    ScmEffects out;
    out.tce = e_do1 - e_do0;
    out.nde = e_cf_nde - e_do0;
    out.nie = e_cf_nie - e_do0;
    out.cde.resize(m.mediator_arity);
    for (std::size_t x = 0; x < m.mediator_arity; ++x) out.cde[x] = m.p_outcome[1][x] - m.p_outcome[0][x];
    return out;
}

/// The observational mediation formulas applied to the model's conditionals.
/// Under this Markovian construction they must coincide with exact_effects;
/// that equality is the module's core check.
inline ScmEffects mediation_formula_effects(const DiscreteScm& m) {
    m.validate();
    ScmEffects out;
    double e1 = 0.0, e0 = 0.0;
    for (std::size_t x = 0; x < m.mediator_arity; ++x) e1 += m.p_mediator[1][x] * m.p_outcome[1][x];
    for (std::size_t x = 0; x < m.mediator_arity; ++x) e0 += m.p_mediator[0][x] * m.p_outcome[0][x];
    out.tce = e1 - e0;
    out.cde.resize(m.mediator_arity);
    for (std::size_t x = 0; x < m.mediator_arity; ++x) out.cde[x] = m.p_outcome[1][x] - m.p_outcome[0][x];
    double acc = 0.0;
    for (std::size_t x = 0; x < m.mediator_arity; ++x) {
        if (m.p_mediator[0][x] == 0.0) continue;
        acc += m.p_mediator[0][x] * (m.p_outcome[1][x] - m.p_outcome[0][x]);
    }
    out.nde = acc;
    acc = 0.0;
    for (std::size_t x = 0; x < m.mediator_arity; ++x) acc += (m.p_mediator[1][x] - m.p_mediator[0][x]) * m.p_outcome[0][x];
    out.nie = acc;
    return out;
}

/// Treatment works only through levels it itself activates: both natural
/// effects vanish while the total effect is 1.
inline DiscreteScm moderation_example() {
    DiscreteScm m;
    m.mediator_arity = 2;
    m.p_mediator[0] = {1.0, 0.0};
    m.p_mediator[1] = {0.0, 1.0};
    m.p_outcome[0] = {0.0, 0.0};
    m.p_outcome[1] = {0.0, 1.0};
    return m;
}

/// Random model: mediator rows from a flat Dirichlet (simplex) sampler,
/// outcome probabilities uniform on [0,1].
inline DiscreteScm random_scm(std::size_t k, SplitMix64& g) {
    DiscreteScm m;
    m.mediator_arity = k;
    for (int t = 0; t < 2; ++t) {
        // exponential spacings normalized -> uniform on the simplex
        std::vector<double> e(k);
        double sum = 0.0;
        for (std::size_t x = 0; x < k; ++x) {
            double u = g.next_double();
            while (u == 0.0) u = g.next_double();
            e[x] = -std::log(u);
            sum += e[x];
        }
        m.p_mediator[t].resize(k);
        for (std::size_t x = 0; x < k; ++x) m.p_mediator[t][x] = e[x] / sum;
        // force an exact unit row sum so validate() holds bit-for-bit
        double row = 0.0;
        for (std::size_t x = 0; x + 1 < k; ++x) row += m.p_mediator[t][x];
        m.p_mediator[t][k - 1] = 1.0 - row;
        if (m.p_mediator[t][k - 1] < 0.0) m.p_mediator[t][k - 1] = 0.0;
        m.p_outcome[t].resize(k);
        for (std::size_t x = 0; x < k; ++x) m.p_outcome[t][x] = g.next_double();
    }
    return m;
}

/// Observational draw from one model: counts per mediator level for each
/// treatment arm, packaged as a control/treatment cohort pair on synthetic
/// decade bands so the whole estimator pipeline runs on them.
struct SyntheticCohortPair {
    StratifiedCohort control;
    StratifiedCohort treatment;
    std::int64_t n_per_arm;
    std::uint64_t seed;
};

inline BandSchema synthetic_schema(std::size_t k) {
    std::vector<AgeBand> bands;
    bands.reserve(k);
    for (std::size_t x = 0; x < k; ++x)
        bands.push_back(AgeBand{static_cast<int>(10 * x), static_cast<int>(10 * x + 9)});
    return BandSchema(std::move(bands));
}

inline SyntheticCohortPair sample_cohorts(const DiscreteScm& m, std::int64_t n_per_arm, std::uint64_t seed) {
    m.validate();
    if (n_per_arm < 1) throw Error("sample_cohorts: n_per_arm must be >= 1");
    BandSchema schema = synthetic_schema(m.mediator_arity);
    std::array<std::vector<std::int64_t>, 2> cases, deaths;
    for (int t = 0; t < 2; ++t) {
        SplitMix64 g(derive_seed(seed, static_cast<std::uint64_t>(t)));
        cases[t] = multinomial(g, n_per_arm, m.p_mediator[t]);
        deaths[t].resize(m.mediator_arity);
        for (std::size_t x = 0; x < m.mediator_arity; ++x)
            deaths[t][x] = binomial(g, cases[t][x], m.p_outcome[t][x]);
    }
    const std::string seed_text = std::to_string(seed);
    StratifiedCohort control("scm control (seed=" + seed_text + ")", Date{2020, 1, 1}, "synthetic", schema,
                             std::move(cases[0]), std::move(deaths[0]));
    StratifiedCohort treatment("scm treatment (seed=" + seed_text + ")", Date{2020, 1, 1}, "synthetic", schema,
                               std::move(cases[1]), std::move(deaths[1]));
    return {std::move(control), std::move(treatment), n_per_arm, seed};
}

/// Empirical conditionals of a cohort pair as mechanism tables. Zero-case
/// bands yield flagged placeholder rows; anything consuming them must pick
/// an undefined-band policy.
struct FittedScm {
    DiscreteScm model;
    std::array<std::vector<char>, 2> defined;  // per (t, x): band had cases

    bool fully_defined() const {
        for (int t = 0; t < 2; ++t)
            for (char d : defined[t])
                if (!d) return false;
        return true;
    }
};

inline FittedScm fit_scm_from_cohorts(const StratifiedCohort& control, const StratifiedCohort& treatment) {
    if (!(control.schema() == treatment.schema()))
        throw SchemaMismatchError(control.schema().labels(), treatment.schema().labels());
    FittedScm fit;
    const std::size_t k = control.schema().size();
    fit.model.mediator_arity = k;
    const StratifiedCohort* arm[2] = {&control, &treatment};
    for (int t = 0; t < 2; ++t) {
        const double total = static_cast<double>(arm[t]->total_cases());
        fit.model.p_mediator[t].resize(k);
        fit.model.p_outcome[t].resize(k);
        fit.defined[t].resize(k);
        for (std::size_t x = 0; x < k; ++x) {
            fit.model.p_mediator[t][x] = static_cast<double>(arm[t]->cases()[x]) / total;
            auto r = arm[t]->cfr(x);
            fit.defined[t][x] = r.has_value() ? 1 : 0;
            fit.model.p_outcome[t][x] = r.value_or(0.0);
        }
    }
    return fit;
}

// Scm file format: "#scm,<k>" then one row per table entry "table,t,x,value"
// with table in {px, py}.

inline std::string serialize(const DiscreteScm& m) {
    std::string out = "#scm," + std::to_string(m.mediator_arity) + "\n";
    for (int t = 0; t < 2; ++t)
        for (std::size_t x = 0; x < m.mediator_arity; ++x)
            out += "px," + std::to_string(t) + "," + std::to_string(x) + "," + io::format_double(m.p_mediator[t][x]) + "\n";
    for (int t = 0; t < 2; ++t)
        for (std::size_t x = 0; x < m.mediator_arity; ++x)
            out += "py," + std::to_string(t) + "," + std::to_string(x) + "," + io::format_double(m.p_outcome[t][x]) + "\n";
    return out;
}

inline DiscreteScm parse_scm_text(std::string_view text, const std::string& origin) {
    auto lines = io::detail::split_lines(text);
    if (lines.empty() || lines[0].rfind("#scm,", 0) != 0)
        throw ParseError(origin + ": expected '#scm,<k>' header");
    auto header = io::detail::split_fields(lines[0]);
    std::int64_t k = 0;
    if (header.size() != 2 || !io::detail::parse_int(header[1], k) || k < 1)
        throw ParseError(origin + ": bad mediator arity in header");
    DiscreteScm m;
    m.mediator_arity = static_cast<std::size_t>(k);
    for (int t = 0; t < 2; ++t) {
        m.p_mediator[t].assign(m.mediator_arity, -1.0);
        m.p_outcome[t].assign(m.mediator_arity, -1.0);
    }
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        auto f = io::detail::split_fields(lines[i]);
        std::int64_t t = 0, x = 0;
        double v = 0.0;
        if (f.size() != 4 || !io::detail::parse_int(f[1], t) || !io::detail::parse_int(f[2], x) ||
            !io::detail::parse_dbl(f[3], v))
            throw ParseError(origin + ":" + std::to_string(i + 1) + ": expected 'table,t,x,value'");
        if (t < 0 || t > 1 || x < 0 || x >= k)
            throw ParseError(origin + ":" + std::to_string(i + 1) + ": index out of range");
        if (f[0] == "px")
            m.p_mediator[static_cast<std::size_t>(t)][static_cast<std::size_t>(x)] = v;
        else if (f[0] == "py")
            m.p_outcome[static_cast<std::size_t>(t)][static_cast<std::size_t>(x)] = v;
        else
            throw ParseError(origin + ":" + std::to_string(i + 1) + ": unknown table '" + f[0] + "'");
    }
    for (int t = 0; t < 2; ++t)
        for (std::size_t x = 0; x < m.mediator_arity; ++x)
            if (m.p_mediator[t][x] < 0.0 || m.p_outcome[t][x] < 0.0)
                throw ParseError(origin + ": missing table entry for t=" + std::to_string(t) + " x=" + std::to_string(x));
    m.validate();
    return m;
}

inline DiscreteScm parse_scm_file(const std::string& path) {
    return parse_scm_text(io::read_file(path), path);
}

} // namespace cfrmed::scm
