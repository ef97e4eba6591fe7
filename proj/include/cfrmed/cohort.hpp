#pragma once

#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cfrmed/age_band.hpp"
#include "cfrmed/date.hpp"
#include "cfrmed/errors.hpp"

namespace cfrmed {

/// Probability weights over the bands of one schema (a case demographic).
struct GroupDistribution {
    BandSchema schema;
    std::vector<double> weights;

    double sum() const { return std::accumulate(weights.begin(), weights.end(), 0.0); }
};

/// Per-band rate in [0,1]; nullopt marks a band with zero cases, which is a
/// distinct "undefined" value and never silently 0.
struct RateTable {
    BandSchema schema;
    std::vector<std::optional<double>> rates;
};

/// Labeled counts of confirmed cases and fatalities per age band for one
/// population snapshot. Counts are exact integers; rates are derived on
/// demand in double precision. Immutable after construction.
///
/// The constructor enforces structural sanity (matching sizes, nonnegative
/// counts); semantic checks (deaths <= cases, declared totals vs sums) are
/// the job of validate() so that validators can inspect bad data.
class StratifiedCohort {
public:
    StratifiedCohort(std::string label, Date report_date, std::string source, BandSchema schema,
                     std::vector<std::int64_t> cases, std::vector<std::int64_t> deaths,
                     std::optional<std::int64_t> declared_total_cases = std::nullopt,
                     std::optional<std::int64_t> declared_total_deaths = std::nullopt)
        : label_(std::move(label)), report_date_(report_date), source_(std::move(source)),
          schema_(std::move(schema)), cases_(std::move(cases)), deaths_(std::move(deaths)),
          declared_total_cases_(declared_total_cases), declared_total_deaths_(declared_total_deaths) {
        if (cases_.size() != schema_.size() || deaths_.size() != schema_.size())
            throw Error("cohort '" + label_ + "': count rows do not match schema size");
        for (std::size_t i = 0; i < cases_.size(); ++i)
            if (cases_[i] < 0 || deaths_[i] < 0)
                throw Error("cohort '" + label_ + "': negative count in band '" + schema_[i].label() + "'");
    }

    const std::string& label() const { return label_; }
    const Date& report_date() const { return report_date_; }
    const std::string& source() const { return source_; }
    const BandSchema& schema() const { return schema_; }
    const std::vector<std::int64_t>& cases() const { return cases_; }
    const std::vector<std::int64_t>& deaths() const { return deaths_; }
    std::optional<std::int64_t> declared_total_cases() const { return declared_total_cases_; }
    std::optional<std::int64_t> declared_total_deaths() const { return declared_total_deaths_; }

    std::int64_t total_cases() const { return std::accumulate(cases_.begin(), cases_.end(), std::int64_t{0}); }
    std::int64_t total_deaths() const { return std::accumulate(deaths_.begin(), deaths_.end(), std::int64_t{0}); }

    /// Case fatality rate of one band; nullopt when the band has zero cases.
    std::optional<double> cfr(std::size_t band_index) const {
        if (band_index >= schema_.size()) throw UnknownBandError("#" + std::to_string(band_index));
        if (cases_[band_index] == 0) return std::nullopt;
        return static_cast<double>(deaths_[band_index]) / static_cast<double>(cases_[band_index]);
    }

    std::optional<double> cfr(const AgeBand& band) const {
        auto idx = schema_.index_of(band);
        if (!idx) throw UnknownBandError(band.label());
        return cfr(*idx);
    }

    /// Aggregate CFR over all bands. Requires total cases >= 1.
    double total_cfr() const {
        std::int64_t tc = total_cases();
        if (tc < 1) throw Error("cohort '" + label_ + "': total_cfr requires at least one case");
        return static_cast<double>(total_deaths()) / static_cast<double>(tc);
    }

    /// Share of confirmed cases falling into each band.
    GroupDistribution case_demographic() const {
        std::int64_t tc = total_cases();
        if (tc < 1) throw Error("cohort '" + label_ + "': case_demographic requires at least one case");
        std::vector<double> w(cases_.size());
        for (std::size_t i = 0; i < cases_.size(); ++i)
            w[i] = static_cast<double>(cases_[i]) / static_cast<double>(tc);
        return GroupDistribution{schema_, std::move(w)};
    }

    RateTable rate_table() const {
        RateTable t{schema_, {}};
        t.rates.reserve(schema_.size());
        for (std::size_t i = 0; i < schema_.size(); ++i) t.rates.push_back(cfr(i));
        return t;
    }

    /// Same counts scaled by a positive integer; rates are unchanged.
    StratifiedCohort scaled(std::int64_t factor) const {
        if (factor < 1) throw Error("scale factor must be a positive integer");
        std::vector<std::int64_t> c(cases_), d(deaths_);
        for (auto& x : c) x *= factor;
        for (auto& x : d) x *= factor;
        return StratifiedCohort(label_, report_date_, source_, schema_, std::move(c), std::move(d));
    }

private:
    std::string label_;
    Date report_date_;
    std::string source_;
    BandSchema schema_;
    std::vector<std::int64_t> cases_;
    std::vector<std::int64_t> deaths_;
    std::optional<std::int64_t> declared_total_cases_;
    std::optional<std::int64_t> declared_total_deaths_;
};

/// Date-ordered snapshots of one population sharing a single schema.
/// Construction enforces the hard invariants (shared schema, strictly
/// increasing dates); cumulative monotonicity is checked by validate() and
/// only warns, because source institutes occasionally revise counts down.
class CohortSeries {
public:
    CohortSeries(std::string label, std::vector<StratifiedCohort> snapshots)
        : label_(std::move(label)), snapshots_(std::move(snapshots)) {
        if (snapshots_.empty()) throw Error("series '" + label_ + "' has no snapshots");
        for (std::size_t i = 1; i < snapshots_.size(); ++i) {
            if (!(snapshots_[i - 1].report_date() < snapshots_[i].report_date()))
                throw Error("series '" + label_ + "': snapshot dates must be strictly increasing (" +
                            snapshots_[i - 1].report_date().iso() + " then " + snapshots_[i].report_date().iso() + ")");
            if (!(snapshots_[i].schema() == snapshots_[0].schema()))
                throw SchemaMismatchError(snapshots_[0].schema().labels(), snapshots_[i].schema().labels());
        }
    }

    const std::string& label() const { return label_; }
    const std::vector<StratifiedCohort>& snapshots() const { return snapshots_; }
    const BandSchema& schema() const { return snapshots_[0].schema(); }

private:
    std::string label_;
    std::vector<StratifiedCohort> snapshots_;
};

// Free-function spellings of the elementary rate operations.

inline std::optional<double> cfr(const StratifiedCohort& cohort, const AgeBand& band) { return cohort.cfr(band); }
inline double total_cfr(const StratifiedCohort& cohort) { return cohort.total_cfr(); }
inline GroupDistribution case_demographic(const StratifiedCohort& cohort) { return cohort.case_demographic(); }

} // namespace cfrmed
