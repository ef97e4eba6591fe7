#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cfrmed/cohort.hpp"
#include "cfrmed/errors.hpp"

namespace cfrmed {

enum class EffectKind { tce, cde, nde, nie, expected_cde, moderation_residual };

inline const char* to_string(EffectKind k) {
    switch (k) {
        case EffectKind::tce: return "TCE";
        case EffectKind::cde: return "CDE";
        case EffectKind::nde: return "NDE";
        case EffectKind::nie: return "NIE";
        case EffectKind::expected_cde: return "ExpectedCDE";
        case EffectKind::moderation_residual: return "ModerationResidual";
    }
    return "?";
}

inline std::optional<EffectKind> effect_kind_from_string(std::string_view s) {
    if (s == "tce" || s == "TCE") return EffectKind::tce;
    if (s == "cde" || s == "CDE") return EffectKind::cde;
    if (s == "nde" || s == "NDE") return EffectKind::nde;
    if (s == "nie" || s == "NIE") return EffectKind::nie;
    return std::nullopt;
}

/// What to do when an estimator needs the rate of a zero-case band:
/// refuse (default for pairwise estimators), or substitute 0 and set the
/// estimate's flag (what the all-pairs matrix uses, so cohorts with empty
/// bands can still be compared).
enum class UndefinedBandPolicy { error_on_undefined, coerce_to_zero };

/// One named causal effect, signed change in total CFR when switching from
/// the control cohort to the treatment cohort.
struct EffectEstimate {
    EffectKind kind = EffectKind::tce;
    std::string control;
    std::string treatment;
    std::optional<AgeBand> band;           // set iff kind == cde
    std::optional<std::string> reference;  // set iff kind == expected_cde
    double value = 0.0;
    bool undefined_band_policy_used = false;
};

namespace detail {

inline EffectEstimate make_estimate(EffectKind kind, const StratifiedCohort& control, const StratifiedCohort& treatment) {
    EffectEstimate e;
    e.kind = kind;
    e.control = control.label();
    e.treatment = treatment.label();
    return e;
}

inline void require_same_schema(const StratifiedCohort& a, const StratifiedCohort& b) {
    if (!(a.schema() == b.schema())) throw SchemaMismatchError(a.schema().labels(), b.schema().labels());
}

// Rate of one band under the active policy. `used` is set when a zero-case
// band had to be coerced.
inline double rate_or_policy(const StratifiedCohort& c, std::size_t band, UndefinedBandPolicy policy, bool& used) {
    auto r = c.cfr(band);
    if (r) return *r;
    if (policy == UndefinedBandPolicy::error_on_undefined)
        throw UndefinedRateError(c.label(), c.schema()[band].label());
    used = true;
    return 0.0;
}

// sum_a P(a | weight_source) * [cfr(treatment, a) - cfr(control, a)] over
// weight-source bands with cases > 0. Shared by nde (weights = control) and
// expected_cde (weights = any reference cohort); keeping one accumulation
// order makes the two provably identical when the weights coincide.
inline double weighted_cde_sum(const StratifiedCohort& control, const StratifiedCohort& treatment,
                               const StratifiedCohort& weight_source, UndefinedBandPolicy policy, bool& used) {
    const double total = static_cast<double>(weight_source.total_cases());
    double acc = 0.0;
    for (std::size_t a = 0; a < weight_source.schema().size(); ++a) {
        if (weight_source.cases()[a] == 0) continue;
        const double w = static_cast<double>(weight_source.cases()[a]) / total;
        const double rt = rate_or_policy(treatment, a, policy, used);
        const double rc = rate_or_policy(control, a, policy, used);
        acc += w * (rt - rc);
    }
    return acc;
}

// sum_a [P(a|treatment) - P(a|control)] * cfr(control, a); zero-case control
// bands contribute only when the weight difference is nonzero, in which case
// the policy decides.
inline double demographic_shift_sum(const StratifiedCohort& control, const StratifiedCohort& treatment,
                                    UndefinedBandPolicy policy, bool& used) {
    const double total_c = static_cast<double>(control.total_cases());
    const double total_t = static_cast<double>(treatment.total_cases());
    double acc = 0.0;
    for (std::size_t a = 0; a < control.schema().size(); ++a) {
        const double wc = static_cast<double>(control.cases()[a]) / total_c;
        const double wt = static_cast<double>(treatment.cases()[a]) / total_t;
        const double diff = wt - wc;
        auto rc = control.cfr(a);
        if (!rc) {
            if (diff == 0.0) continue;
            if (policy == UndefinedBandPolicy::error_on_undefined)
                throw UndefinedRateError(control.label(), control.schema()[a].label());
            used = true;
            continue;  // coerced rate 0 contributes nothing
        }
        acc += diff * *rc;
    }
    return acc;
}

} // namespace detail

/// Total causal effect: difference of total CFRs. Antisymmetric exactly,
/// IEEE negation being sign-symmetric.
inline EffectEstimate tce(const StratifiedCohort& control, const StratifiedCohort& treatment) {
    detail::require_same_schema(control, treatment);
    EffectEstimate e = detail::make_estimate(EffectKind::tce, control, treatment);
    e.value = treatment.total_cfr() - control.total_cfr();
    return e;
}

/// Controlled direct effect for one band: difference of the band CFRs.
/// Requires cases > 0 in both cohorts for that band.
inline EffectEstimate cde(const StratifiedCohort& control, const StratifiedCohort& treatment, const AgeBand& band) {
    detail::require_same_schema(control, treatment);
    auto idx = control.schema().index_of(band);
    if (!idx) throw UnknownBandError(band.label());
    auto rt = treatment.cfr(*idx);
    auto rc = control.cfr(*idx);
    if (!rt) throw UndefinedRateError(treatment.label(), band.label());
    if (!rc) throw UndefinedRateError(control.label(), band.label());
    EffectEstimate e = detail::make_estimate(EffectKind::cde, control, treatment);
    e.band = band;
    e.value = *rt - *rc;
    return e;
}

/// Natural direct effect: expected CDE under the control case demographic.
inline EffectEstimate nde(const StratifiedCohort& control, const StratifiedCohort& treatment,
                          UndefinedBandPolicy policy = UndefinedBandPolicy::error_on_undefined) {
    detail::require_same_schema(control, treatment);
    EffectEstimate e = detail::make_estimate(EffectKind::nde, control, treatment);
    e.value = detail::weighted_cde_sum(control, treatment, control, policy, e.undefined_band_policy_used);
    return e;
}

/// Natural indirect effect: control CFRs reweighted by the treatment-vs-
/// control shift in case demographic.
inline EffectEstimate nie(const StratifiedCohort& control, const StratifiedCohort& treatment,
                          UndefinedBandPolicy policy = UndefinedBandPolicy::error_on_undefined) {
    detail::require_same_schema(control, treatment);
    EffectEstimate e = detail::make_estimate(EffectKind::nie, control, treatment);
    e.value = detail::demographic_shift_sum(control, treatment, policy, e.undefined_band_policy_used);
    return e;
}

/// Expected CDE against an arbitrary reference demographic (the "which
/// approach should a third population adopt" question). Reduces to nde when
/// reference == control.
inline EffectEstimate expected_cde(const StratifiedCohort& control, const StratifiedCohort& treatment,
                                   const StratifiedCohort& reference,
                                   UndefinedBandPolicy policy = UndefinedBandPolicy::error_on_undefined) {
    detail::require_same_schema(control, treatment);
    detail::require_same_schema(control, reference);
    EffectEstimate e = detail::make_estimate(EffectKind::expected_cde, control, treatment);
    e.reference = reference.label();
    e.value = detail::weighted_cde_sum(control, treatment, reference, policy, e.undefined_band_policy_used);
    return e;
}

/// Residuals of the two subtractivity identities
///   TCE(0->1) = NDE(0->1) - NIE(1->0) = NIE(0->1) - NDE(1->0),
/// which are algebraic consequences of the estimator formulas and must
/// vanish up to rounding.
inline std::pair<double, double> subtractivity_check(const StratifiedCohort& control, const StratifiedCohort& treatment,
                                                     UndefinedBandPolicy policy = UndefinedBandPolicy::error_on_undefined) {
    const double t01 = tce(control, treatment).value;
    const double nde01 = nde(control, treatment, policy).value;
    const double nie10 = nie(treatment, control, policy).value;
    const double nie01 = nie(control, treatment, policy).value;
    const double nde10 = nde(treatment, control, policy).value;
    return {std::abs(t01 - (nde01 - nie10)), std::abs(t01 - (nie01 - nde10))};
}

/// tce - (nde + nie): nonzero whenever treatment and mediator interact.
inline EffectEstimate moderation_residual(const StratifiedCohort& control, const StratifiedCohort& treatment,
                                          UndefinedBandPolicy policy = UndefinedBandPolicy::error_on_undefined) {
    EffectEstimate e = detail::make_estimate(EffectKind::moderation_residual, control, treatment);
    EffectEstimate d = nde(control, treatment, policy);
    EffectEstimate i = nie(control, treatment, policy);
    e.value = tce(control, treatment).value - (d.value + i.value);
    e.undefined_band_policy_used = d.undefined_band_policy_used || i.undefined_band_policy_used;
    return e;
}

/// Per-band effect signs against the aggregate sign. A reversal needs a
/// nonzero total sign, no defined band agreeing with it, and at least one
/// band strictly opposed; exact-zero band CDEs are reported as ties and do
/// not defeat the verdict.
struct SimpsonVerdict {
    std::string control;
    std::string treatment;
    std::vector<std::optional<int>> per_band_cde_signs;  // aligned with schema; nullopt = skipped
    int total_sign = 0;
    bool is_reversal = false;
    std::vector<AgeBand> skipped_bands;
};

inline SimpsonVerdict simpson_verdict(const StratifiedCohort& control, const StratifiedCohort& treatment) {
    detail::require_same_schema(control, treatment);
    auto sign = [](double v) { return (v > 0.0) - (v < 0.0); };
    SimpsonVerdict verdict;
    verdict.control = control.label();
    verdict.treatment = treatment.label();
    verdict.total_sign = sign(tce(control, treatment).value);
    bool any_opposite = false;
    bool any_agreeing = false;
    for (std::size_t a = 0; a < control.schema().size(); ++a) {
        auto rc = control.cfr(a);
        auto rt = treatment.cfr(a);
        if (!rc || !rt) {
            verdict.per_band_cde_signs.push_back(std::nullopt);
            verdict.skipped_bands.push_back(control.schema()[a]);
            continue;
        }
        int s = sign(*rt - *rc);
        verdict.per_band_cde_signs.push_back(s);
        if (s != 0 && s == -verdict.total_sign) any_opposite = true;
        if (s != 0 && s == verdict.total_sign) any_agreeing = true;
    }
    verdict.is_reversal = verdict.total_sign != 0 && any_opposite && !any_agreeing;
    return verdict;
}

/// TCE/NDE/NIE over the snapshots of a series, with the control fixed.
struct EffectTrace {
    struct Point {
        Date date;
        double tce;
        double nde;
        double nie;
    };
    std::string control;
    std::string series_label;
    std::vector<Point> points;
};

inline EffectTrace trace(const StratifiedCohort& control, const CohortSeries& series,
                         UndefinedBandPolicy policy = UndefinedBandPolicy::error_on_undefined) {
    EffectTrace out;
    out.control = control.label();
    out.series_label = series.label();
    out.points.reserve(series.snapshots().size());
    for (const auto& snap : series.snapshots()) {
        out.points.push_back({snap.report_date(), tce(control, snap).value, nde(control, snap, policy).value,
                              nie(control, snap, policy).value});
    }
    return out;
}

/// All ordered-pair effects over a cohort set. Rows are treatments, columns
/// controls; the diagonal is exactly zero. Rows/columns are ordered
/// ascending by each cohort's mean effect as a treatment over the other
/// columns (ties broken alphabetically). Cells that needed the coerce-to-0
/// policy carry a flag.
struct PairwiseEffectMatrix {
    EffectKind kind = EffectKind::tce;
    std::vector<std::string> labels;
    std::vector<double> values;   // row-major
    std::vector<char> coerced;    // row-major flags
    std::string ordering_rule;

    std::size_t size() const { return labels.size(); }
    double at(std::size_t treatment_row, std::size_t control_col) const {
        return values[treatment_row * labels.size() + control_col];
    }
    bool coerced_at(std::size_t treatment_row, std::size_t control_col) const {
        return coerced[treatment_row * labels.size() + control_col] != 0;
    }
    /// Mean of one row excluding the diagonal.
    std::vector<double> row_means() const {
        const std::size_t n = labels.size();
        std::vector<double> means(n, 0.0);
        for (std::size_t r = 0; r < n; ++r) {
            double acc = 0.0;
            for (std::size_t c = 0; c < n; ++c)
                if (c != r) acc += at(r, c);
            means[r] = acc / static_cast<double>(n - 1);
        }
        return means;
    }
};

inline PairwiseEffectMatrix pairwise_matrix(const std::vector<const StratifiedCohort*>& cohorts, EffectKind kind,
                                            UndefinedBandPolicy policy = UndefinedBandPolicy::coerce_to_zero) {
    if (kind != EffectKind::tce && kind != EffectKind::nde && kind != EffectKind::nie)
        throw Error("pairwise_matrix supports TCE, NDE, and NIE only");
    if (cohorts.size() < 2) throw Error("pairwise_matrix needs at least two cohorts");
    for (std::size_t i = 1; i < cohorts.size(); ++i) detail::require_same_schema(*cohorts[0], *cohorts[i]);

    const std::size_t n = cohorts.size();
    PairwiseEffectMatrix m;
    m.kind = kind;
    m.values.assign(n * n, 0.0);
    m.coerced.assign(n * n, 0);
    for (const auto* c : cohorts) m.labels.push_back(c->label());

    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            if (r == c) continue;  // diagonal stays exactly 0
            EffectEstimate e;
            switch (kind) {
                case EffectKind::tce: e = tce(*cohorts[c], *cohorts[r]); break;
                case EffectKind::nde: e = nde(*cohorts[c], *cohorts[r], policy); break;
                default: e = nie(*cohorts[c], *cohorts[r], policy); break;
            }
            m.values[r * n + c] = e.value;
            m.coerced[r * n + c] = e.undefined_band_policy_used ? 1 : 0;
        }
    }

    // Order rows and columns by mean effect as treatment, most negative first.
    std::vector<double> means = m.row_means();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (means[a] != means[b]) return means[a] < means[b];
        return m.labels[a] < m.labels[b];
    });

    PairwiseEffectMatrix sorted;
    sorted.kind = kind;
    sorted.ordering_rule = "rows/columns ascending by mean effect as treatment over the other controls; ties alphabetical";
    sorted.values.assign(n * n, 0.0);
    sorted.coerced.assign(n * n, 0);
    for (std::size_t i = 0; i < n; ++i) sorted.labels.push_back(m.labels[order[i]]);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
            sorted.values[r * n + c] = m.values[order[r] * n + order[c]];
            sorted.coerced[r * n + c] = m.coerced[order[r] * n + order[c]];
        }
    return sorted;
}

/// Same matrix re-indexed to a caller-supplied label order (e.g. to align a
/// NIE matrix with a NDE matrix before comparing cells).
inline PairwiseEffectMatrix reordered(const PairwiseEffectMatrix& m, const std::vector<std::string>& labels) {
    if (labels.size() != m.labels.size()) throw Error("reordered: label count mismatch");
    const std::size_t n = labels.size();
    std::vector<std::size_t> index(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto it = std::find(m.labels.begin(), m.labels.end(), labels[i]);
        if (it == m.labels.end()) throw UnknownLabelError(labels[i], m.labels);
        index[i] = static_cast<std::size_t>(it - m.labels.begin());
    }
    PairwiseEffectMatrix out;
    out.kind = m.kind;
    out.labels = labels;
    out.ordering_rule = "caller-supplied order";
    out.values.assign(n * n, 0.0);
    out.coerced.assign(n * n, 0);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
            out.values[r * n + c] = m.values[index[r] * n + index[c]];
            out.coerced[r * n + c] = m.coerced[index[r] * n + index[c]];
        }
    return out;
}

} // namespace cfrmed
