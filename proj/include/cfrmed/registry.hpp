#pragma once

#include <cstdlib>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cfrmed/bundled_data.hpp"
#include "cfrmed/cohort.hpp"
#include "cfrmed/errors.hpp"
#include "cfrmed/io.hpp"
#include "cfrmed/validation.hpp"

namespace cfrmed {

namespace detail {

// Levenshtein distance, used only for "did you mean" label suggestions.
inline std::size_t edit_distance(std::string_view a, std::string_view b) {
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

inline std::vector<std::string> nearest_labels(const std::string& wanted, std::vector<std::string> candidates,
                                               std::size_t max_out = 3) {
    std::sort(candidates.begin(), candidates.end(), [&](const std::string& a, const std::string& b) {
        auto da = edit_distance(wanted, a), db = edit_distance(wanted, b);
        return da != db ? da < db : a < b;
    });
    if (candidates.size() > max_out) candidates.resize(max_out);
    return candidates;
}

} // namespace detail

/// Holds the validated objects of one loaded dataset. Labels are unique per
/// category; the load-time report keeps the warnings the parser produced.
class DatasetRegistry {
public:
    DatasetRegistry() = default;
    explicit DatasetRegistry(std::string name) : name_(std::move(name)) {}

    const std::string& name() const { return name_; }
    std::uint64_t content_hash() const { return content_hash_; }
    void set_content_hash(std::uint64_t h) { content_hash_ = h; }
    const ValidationReport& load_report() const { return load_report_; }
    void merge_report(const ValidationReport& r) { load_report_.merge(r); }

    void add_cohort(StratifiedCohort cohort) {
        ValidationReport r = validate(cohort);
        const std::string label = cohort.label();
        if (!r.ok()) throw Error("cohort '" + label + "' failed validation: " + r.errors.front().message);
        if (!cohorts_.emplace(label, std::move(cohort)).second)
            throw Error("duplicate cohort label '" + label + "'");
    }

    void add_series(CohortSeries series) {
        ValidationReport r = validate(series);
        const std::string label = series.label();
        if (!r.ok()) throw Error("series '" + label + "' failed validation: " + r.errors.front().message);
        if (!series_.emplace(label, std::move(series)).second)
            throw Error("duplicate series label '" + label + "'");
    }

    void add_scalars(ScalarTable table) {
        std::string name = table.name;
        if (!scalars_.emplace(name, std::move(table)).second)
            throw Error("duplicate scalar table '" + name + "'");
    }

    /// Backdoor for validation tooling and tests: stores the object without
    /// the add-time validation gate.
    void insert_without_validation(StratifiedCohort cohort) {
        const std::string label = cohort.label();
        cohorts_.insert_or_assign(label, std::move(cohort));
    }

    const std::map<std::string, StratifiedCohort>& cohorts() const { return cohorts_; }
    const std::map<std::string, CohortSeries>& series() const { return series_; }
    const std::map<std::string, ScalarTable>& scalars() const { return scalars_; }

    const StratifiedCohort& cohort(const std::string& label) const {
        auto it = cohorts_.find(label);
        if (it == cohorts_.end()) {
            if (series_.count(label))
                throw Error("label '" + label + "' names a series, not a cohort; pick one of its snapshots' dates via trace");
            throw UnknownLabelError(label, detail::nearest_labels(label, cohort_labels()));
        }
        return it->second;
    }

    const CohortSeries& one_series() const {
        if (series_.size() != 1)
            throw Error("dataset '" + name_ + "' holds " + std::to_string(series_.size()) +
                        " series; expected exactly one");
        return series_.begin()->second;
    }

    const ScalarTable& scalar_table(const std::string& name) const {
        auto it = scalars_.find(name);
        if (it == scalars_.end()) {
            std::vector<std::string> avail;
            for (const auto& [k, v] : scalars_) avail.push_back(k);
            throw UnknownLabelError(name, avail);
        }
        return it->second;
    }

    std::vector<std::string> cohort_labels() const {
        std::vector<std::string> out;
        for (const auto& [k, v] : cohorts_) out.push_back(k);
        return out;
    }

    std::vector<const StratifiedCohort*> cohorts_in_label_order() const {
        std::vector<const StratifiedCohort*> out;
        for (const auto& [k, v] : cohorts_) out.push_back(&v);
        return out;
    }

private:
    std::string name_;
    std::uint64_t content_hash_ = 0;
    ValidationReport load_report_;
    std::map<std::string, StratifiedCohort> cohorts_;
    std::map<std::string, CohortSeries> series_;
    std::map<std::string, ScalarTable> scalars_;
};

/// Re-runs every semantic check over the registry's stored objects.
/// Idempotent; independent of whatever the parser reported at load time.
inline ValidationReport validate_registry(const DatasetRegistry& registry) {
    ValidationReport report;
    for (const auto& [label, cohort] : registry.cohorts()) report.merge(validate(cohort));
    for (const auto& [label, series] : registry.series()) report.merge(validate(series));
    for (const auto& [name, table] : registry.scalars()) {
        for (const auto& [l, v] : table.entries)
            if (!(v == v))  // NaN check
                report.error(name, "scalar '" + l + "' is not a number");
    }
    return report;
}

inline const char* data_dir_env_var() { return "CFRMED_DATA_DIR"; }

namespace detail {

inline std::string bundled_file_content(std::string_view path) {
    const char* dir = std::getenv(data_dir_env_var());
    if (dir && *dir) {
        std::filesystem::path p = std::filesystem::path(dir) / std::string(path);
        if (std::filesystem::exists(p)) return io::read_file(p.string());
    }
    for (const auto& f : bundled::files())
        if (f.path == path) return std::string(f.content);
    throw UnknownDatasetError(std::string(path));
}

inline void add_parsed(DatasetRegistry& registry, const io::ParsedObject& parsed, const std::string& origin) {
    if (!parsed.report.ok()) {
        std::string msg = "dataset file '" + origin + "' failed validation:";
        for (const auto& e : parsed.report.errors) msg += "\n  " + e.location + ": " + e.message;
        throw ParseError(msg);
    }
    registry.merge_report(parsed.report);
    if (parsed.cohort) registry.add_cohort(*parsed.cohort);
    if (parsed.series) registry.add_series(*parsed.series);
}

} // namespace detail

inline std::vector<std::string> bundled_dataset_names() {
    std::vector<std::string> out;
    for (const auto& d : bundled::datasets()) out.emplace_back(d.name);
    return out;
}

/// Loads one bundled dataset (all its member files) into a fresh registry.
inline DatasetRegistry load_bundled(const std::string& name) {
    const bundled::Dataset* spec = nullptr;
    for (const auto& d : bundled::datasets())
        if (d.name == name) spec = &d;
    if (!spec) throw UnknownDatasetError(name);

    DatasetRegistry registry(name);
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (std::string_view path : spec->files) {
        std::string content = detail::bundled_file_content(path);
        hash ^= io::fnv1a64(std::string(path));
        hash *= 0x100000001b3ULL;
        hash ^= io::fnv1a64(content);
        hash *= 0x100000001b3ULL;
        const std::string origin(path);
        if (content.rfind("#scalars,", 0) == 0) {
            auto parsed = io::parse_scalar_text(content, origin);
            if (!parsed.report.ok())
                throw ParseError("dataset file '" + origin + "' failed validation: " + parsed.report.errors.front().message);
            registry.add_scalars(*parsed.table);
        } else {
            detail::add_parsed(registry, io::parse_cohort_text(content, origin), origin);
        }
    }
    registry.set_content_hash(hash);
    return registry;
}

/// Resolves one --data argument: a bundled dataset name, or a path to one file.
inline DatasetRegistry load_dataset(const std::string& name_or_path) {
    for (const auto& d : bundled::datasets())
        if (d.name == name_or_path) return load_bundled(name_or_path);
    if (!std::filesystem::exists(name_or_path)) throw UnknownDatasetError(name_or_path);
    DatasetRegistry registry(name_or_path);
    std::string content = io::read_file(name_or_path);
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    hash ^= io::fnv1a64(name_or_path);
    hash *= 0x100000001b3ULL;
    hash ^= io::fnv1a64(content);
    hash *= 0x100000001b3ULL;
    if (content.rfind("#scalars,", 0) == 0) {
        auto parsed = io::parse_scalar_text(content, name_or_path);
        if (!parsed.report.ok())
            throw ParseError("dataset file '" + name_or_path + "' failed validation: " + parsed.report.errors.front().message);
        registry.add_scalars(*parsed.table);
    } else {
        detail::add_parsed(registry, io::parse_cohort_text(content, name_or_path), name_or_path);
    }
    registry.set_content_hash(hash);
    return registry;
}

/// Merges several --data arguments (bundled names and/or file paths) into
/// one registry. Labels must stay unique across the members.
inline DatasetRegistry load_merged(const std::vector<std::string>& names_or_paths) {
    if (names_or_paths.empty()) throw Error("no dataset given");
    if (names_or_paths.size() == 1) return load_dataset(names_or_paths[0]);
    std::string combined_name;
    for (const auto& n : names_or_paths) {
        if (!combined_name.empty()) combined_name += "+";
        combined_name += n;
    }
    DatasetRegistry merged(combined_name);
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (const auto& n : names_or_paths) {
        DatasetRegistry part = load_dataset(n);
        hash ^= part.content_hash();
        hash *= 0x100000001b3ULL;
        merged.merge_report(part.load_report());
        for (const auto& [label, cohort] : part.cohorts()) merged.add_cohort(cohort);
        for (const auto& [label, series] : part.series()) merged.add_series(series);
        for (const auto& [label, table] : part.scalars()) merged.add_scalars(table);
    }
    merged.set_content_hash(hash);
    return merged;
}

} // namespace cfrmed
