#pragma once

#include <string>
#include <vector>

#include "cfrmed/cohort.hpp"

namespace cfrmed {

/// Outcome of validating one object or a whole registry. Ingestion succeeds
/// iff errors is empty; warnings never block.
struct ValidationReport {
    struct Item {
        std::string location;
        std::string message;
        bool operator==(const Item&) const = default;
    };

    std::vector<Item> errors;
    std::vector<Item> warnings;

    bool ok() const { return errors.empty(); }

    void error(std::string location, std::string message) {
        errors.push_back({std::move(location), std::move(message)});
    }
    void warn(std::string location, std::string message) {
        warnings.push_back({std::move(location), std::move(message)});
    }
    void merge(const ValidationReport& other) {
        errors.insert(errors.end(), other.errors.begin(), other.errors.end());
        warnings.insert(warnings.end(), other.warnings.begin(), other.warnings.end());
    }
};

inline std::string cohort_location(const StratifiedCohort& c) {
    return c.label() + " " + c.report_date().iso();
}

/// Semantic checks on one cohort: deaths <= cases per band (error), at least
/// one case overall (error), declared totals vs per-band sums (warning; the
/// per-band sum is authoritative, source tables carry internal discrepancies).
inline ValidationReport validate(const StratifiedCohort& c) {
    ValidationReport report;
    const std::string loc = cohort_location(c);
    for (std::size_t i = 0; i < c.schema().size(); ++i) {
        if (c.deaths()[i] > c.cases()[i])
            report.error(loc, "band " + c.schema()[i].label() + ": deaths exceed cases (" +
                                  std::to_string(c.deaths()[i]) + " > " + std::to_string(c.cases()[i]) + ")");
    }
    if (c.total_cases() < 1) report.error(loc, "cohort has no cases");
    if (c.declared_total_cases() && *c.declared_total_cases() != c.total_cases())
        report.warn(loc, "declared total cases " + std::to_string(*c.declared_total_cases()) +
                             " != sum of per-band cases " + std::to_string(c.total_cases()));
    if (c.declared_total_deaths() && *c.declared_total_deaths() != c.total_deaths())
        report.warn(loc, "declared total deaths " + std::to_string(*c.declared_total_deaths()) +
                             " != sum of per-band deaths " + std::to_string(c.total_deaths()));
    return report;
}

/// Per-snapshot checks plus cumulative monotonicity across snapshots
/// (warning on decrease, not error).
inline ValidationReport validate(const CohortSeries& s) {
    ValidationReport report;
    for (const auto& snap : s.snapshots()) report.merge(validate(snap));
    for (std::size_t i = 1; i < s.snapshots().size(); ++i) {
        const auto& prev = s.snapshots()[i - 1];
        const auto& cur = s.snapshots()[i];
        for (std::size_t b = 0; b < cur.schema().size(); ++b) {
            const std::string band = cur.schema()[b].label();
            if (cur.cases()[b] < prev.cases()[b])
                report.warn(cohort_location(cur), "band " + band + ": cases decreased from " +
                                                      std::to_string(prev.cases()[b]) + " to " +
                                                      std::to_string(cur.cases()[b]) +
                                                      " (non-monotone cumulative series)");
            if (cur.deaths()[b] < prev.deaths()[b])
                report.warn(cohort_location(cur), "band " + band + ": deaths decreased from " +
                                                      std::to_string(prev.deaths()[b]) + " to " +
                                                      std::to_string(cur.deaths()[b]) +
                                                      " (non-monotone cumulative series)");
        }
    }
    return report;
}

} // namespace cfrmed
