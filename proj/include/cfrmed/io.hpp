#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "cfrmed/cohort.hpp"
#include "cfrmed/validation.hpp"

namespace cfrmed {

/// Named scalar-per-label table (e.g. median age per country).
struct ScalarTable {
    std::string name;
    std::string source;
    std::vector<std::pair<std::string, double>> entries;

    std::optional<double> value_of(std::string_view label) const {
        for (const auto& [l, v] : entries)
            if (l == label) return v;
        return std::nullopt;
    }
    std::vector<std::string> labels() const {
        std::vector<std::string> out;
        out.reserve(entries.size());
        for (const auto& [l, v] : entries) out.push_back(l);
        return out;
    }
};

namespace io {

// 64-bit FNV-1a, used as the dataset content hash printed with results.
inline std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[v & 0xf];
        v >>= 4;
    }
    return out;
}

// Shortest round-trip decimal form of a double.
inline std::string format_double(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, p);
}

namespace detail {

inline std::vector<std::string> split_lines(std::string_view text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.emplace_back(line);
        if (end == text.size()) break;
        start = end + 1;
    }
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    return lines;
}

inline std::vector<std::string> split_fields(std::string_view line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.emplace_back(line.substr(start));
            break;
        }
        out.emplace_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return out;
}

inline bool parse_int(std::string_view s, std::int64_t& out) {
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && p == s.data() + s.size();
}

inline bool parse_dbl(std::string_view s, double& out) {
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && p == s.data() + s.size();
}

} // namespace detail

/// Result of parsing one cohort file: exactly one of cohort/series is set
/// when the report has no errors; neither when it does.
struct ParsedObject {
    std::optional<StratifiedCohort> cohort;
    std::optional<CohortSeries> series;
    ValidationReport report;

    bool ok() const { return report.ok(); }
};

struct ParsedScalars {
    std::optional<ScalarTable> table;
    ValidationReport report;
};

namespace detail {

struct RawCohortBlock {
    std::string label;
    std::string date_text;
    std::string source_key;
    std::vector<std::string> source_lines;
    std::vector<std::string> band_labels;
    std::vector<std::int64_t> cases;
    std::vector<std::int64_t> deaths;
    std::optional<std::int64_t> total_cases;
    std::optional<std::int64_t> total_deaths;
    std::size_t header_lineno = 0;
};

// Reads the cohort block starting at lines[i] (which must be a "#cohort" line);
// leaves i at the first line past the block.
inline std::optional<RawCohortBlock> read_block(const std::vector<std::string>& lines, std::size_t& i,
                                                const std::string& origin, ValidationReport& report) {
    RawCohortBlock blk;
    blk.header_lineno = i + 1;
    auto header = split_fields(lines[i]);
    if (header.size() != 4 || header[0] != "#cohort") {
        report.error(origin + ":" + std::to_string(i + 1), "malformed header: expected '#cohort,<label>,<date>,<source>'");
        return std::nullopt;
    }
    blk.label = header[1];
    blk.date_text = header[2];
    blk.source_key = header[3];
    ++i;
    while (i < lines.size() && lines[i].rfind("source:", 0) == 0) {
        std::string s = lines[i].substr(7);
        if (!s.empty() && s.front() == ' ') s.erase(0, 1);
        blk.source_lines.push_back(s);
        ++i;
    }
    if (i >= lines.size() || lines[i] != "band,cases,deaths") {
        report.error(origin + ":" + std::to_string(i + 1), "malformed header: expected column row 'band,cases,deaths'");
        return std::nullopt;
    }
    ++i;
    bool bad = false;
    for (; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        if (lines[i].front() == '#') break;  // next block
        auto fields = split_fields(lines[i]);
        const std::string where = origin + ":" + std::to_string(i + 1);
        if (fields.size() != 3) {
            report.error(where, "expected 3 fields, got " + std::to_string(fields.size()));
            bad = true;
            continue;
        }
        std::int64_t c = 0, d = 0;
        if (!parse_int(fields[1], c) || !parse_int(fields[2], d)) {
            report.error(where, "count is not an integer");
            bad = true;
            continue;
        }
        if (fields[0] == "total") {
            if (blk.total_cases) {
                report.error(where, "duplicate total row");
                bad = true;
                continue;
            }
            blk.total_cases = c;
            blk.total_deaths = d;
            continue;
        }
        if (blk.total_cases) {
            report.error(where, "band row after total row");
            bad = true;
            continue;
        }
        if (!AgeBand::try_parse(fields[0])) {
            report.error(where, "unknown band label '" + fields[0] + "'");
            bad = true;
            continue;
        }
        if (c < 0 || d < 0) {
            report.error(where, "negative count in band '" + fields[0] + "'");
            bad = true;
            continue;
        }
        blk.band_labels.push_back(fields[0]);
        blk.cases.push_back(c);
        blk.deaths.push_back(d);
    }
    if (bad) return std::nullopt;
    if (blk.band_labels.empty()) {
        report.error(origin + ":" + std::to_string(blk.header_lineno), "cohort block has no band rows");
        return std::nullopt;
    }
    return blk;
}

inline std::optional<StratifiedCohort> build_cohort(const RawCohortBlock& blk, const std::string& origin,
                                                    ValidationReport& report) {
    const std::string where = origin + ":" + std::to_string(blk.header_lineno);
    auto date = Date::parse(blk.date_text);
    if (!date) {
        report.error(where, "malformed date '" + blk.date_text + "' (expected YYYY-MM-DD)");
        return std::nullopt;
    }
    std::string source = blk.source_key;
    for (const auto& s : blk.source_lines) source += "; " + s;
    try {
        BandSchema schema = BandSchema::from_labels(blk.band_labels);
        StratifiedCohort cohort(blk.label, *date, source, std::move(schema), blk.cases, blk.deaths,
                                blk.total_cases, blk.total_deaths);
        ValidationReport semantic = validate(cohort);
        report.merge(semantic);
        if (!semantic.ok()) return std::nullopt;
        return cohort;
    } catch (const Error& e) {
        report.error(where, e.what());
        return std::nullopt;
    }
}

} // namespace detail

/// Parses one cohort or series file from text. Every anomaly is reported;
/// an object is produced only when the report carries no errors.
inline ParsedObject parse_cohort_text(std::string_view text, const std::string& origin) {
    ParsedObject result;
    auto lines = detail::split_lines(text);
    if (lines.empty()) {
        result.report.error(origin, "empty file");
        return result;
    }
    std::size_t i = 0;
    if (lines[0].rfind("#series,", 0) == 0) {
        auto header = detail::split_fields(lines[0]);
        if (header.size() != 2) {
            result.report.error(origin + ":1", "malformed header: expected '#series,<label>'");
            return result;
        }
        const std::string series_label = header[1];
        ++i;
        std::vector<StratifiedCohort> snapshots;
        bool bad = false;
        while (i < lines.size()) {
            if (lines[i].empty()) {
                ++i;
                continue;
            }
            auto blk = detail::read_block(lines, i, origin, result.report);
            if (!blk) {
                bad = true;
                continue;
            }
            if (blk->label != series_label) {
                result.report.error(origin + ":" + std::to_string(blk->header_lineno),
                                    "snapshot label '" + blk->label + "' does not match series label '" + series_label + "'");
                bad = true;
                continue;
            }
            auto cohort = detail::build_cohort(*blk, origin, result.report);
            if (!cohort) {
                bad = true;
                continue;
            }
            snapshots.push_back(std::move(*cohort));
        }
        if (snapshots.empty()) {
            result.report.error(origin, "series has no snapshots");
            return result;
        }
        for (std::size_t k = 1; k < snapshots.size(); ++k) {
            if (snapshots[k].report_date() == snapshots[k - 1].report_date()) {
                result.report.error(origin, "duplicate date " + snapshots[k].report_date().iso() + " in series");
                bad = true;
            } else if (snapshots[k].report_date() < snapshots[k - 1].report_date()) {
                result.report.error(origin, "snapshot dates out of order at " + snapshots[k].report_date().iso());
                bad = true;
            }
        }
        if (bad) return result;
        try {
            CohortSeries series(series_label, std::move(snapshots));
            result.report.merge(validate(series));
            if (result.report.ok()) result.series = std::move(series);
        } catch (const Error& e) {
            result.report.error(origin, e.what());
        }
        return result;
    }
    if (lines[0].rfind("#cohort,", 0) == 0) {
        auto blk = detail::read_block(lines, i, origin, result.report);
        if (i < lines.size()) result.report.error(origin + ":" + std::to_string(i + 1), "unexpected extra block in cohort file");
        if (!blk || !result.report.ok()) return result;
        auto cohort = detail::build_cohort(*blk, origin, result.report);
        if (cohort && result.report.ok()) result.cohort = std::move(*cohort);
        return result;
    }
    result.report.error(origin + ":1", "malformed header: expected '#cohort,...' or '#series,...'");
    return result;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline ParsedObject parse_cohort_file(const std::string& path) {
    return parse_cohort_text(read_file(path), path);
}

inline ParsedScalars parse_scalar_text(std::string_view text, const std::string& origin) {
    ParsedScalars result;
    auto lines = detail::split_lines(text);
    if (lines.empty() || lines[0].rfind("#scalars,", 0) != 0) {
        result.report.error(origin + ":1", "malformed header: expected '#scalars,<name>'");
        return result;
    }
    auto header = detail::split_fields(lines[0]);
    if (header.size() != 2) {
        result.report.error(origin + ":1", "malformed header: expected '#scalars,<name>'");
        return result;
    }
    ScalarTable table;
    table.name = header[1];
    std::size_t i = 1;
    while (i < lines.size() && lines[i].rfind("source:", 0) == 0) {
        std::string s = lines[i].substr(7);
        if (!s.empty() && s.front() == ' ') s.erase(0, 1);
        if (!table.source.empty()) table.source += "; ";
        table.source += s;
        ++i;
    }
    if (i >= lines.size() || lines[i] != "label,value") {
        result.report.error(origin + ":" + std::to_string(i + 1), "expected column row 'label,value'");
        return result;
    }
    ++i;
    for (; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        auto fields = detail::split_fields(lines[i]);
        const std::string where = origin + ":" + std::to_string(i + 1);
        double v = 0;
        if (fields.size() != 2 || !detail::parse_dbl(fields[1], v)) {
            result.report.error(where, "expected '<label>,<value>'");
            continue;
        }
        for (const auto& [l, unused] : table.entries)
            if (l == fields[0]) result.report.error(where, "duplicate label '" + fields[0] + "'");
        table.entries.emplace_back(fields[0], v);
    }
    if (table.entries.empty()) result.report.error(origin, "scalar table has no entries");
    if (result.report.ok()) result.table = std::move(table);
    return result;
}

inline ParsedScalars parse_scalar_file(const std::string& path) {
    return parse_scalar_text(read_file(path), path);
}

// Canonical serializations; numeric content round-trips bit-exactly.

inline std::string serialize(const StratifiedCohort& c) {
    std::string out = "#cohort," + c.label() + "," + c.report_date().iso() + ",";
    // the first "; "-separated token of source is the citation key
    std::string source = c.source();
    auto cut = source.find("; ");
    if (cut == std::string::npos) {
        out += source + "\n";
    } else {
        out += source.substr(0, cut) + "\n";
        out += "source: " + source.substr(cut + 2) + "\n";
    }
    out += "band,cases,deaths\n";
    for (std::size_t i = 0; i < c.schema().size(); ++i)
        out += c.schema()[i].label() + "," + std::to_string(c.cases()[i]) + "," + std::to_string(c.deaths()[i]) + "\n";
    if (c.declared_total_cases() || c.declared_total_deaths())
        out += "total," + std::to_string(c.declared_total_cases().value_or(c.total_cases())) + "," +
               std::to_string(c.declared_total_deaths().value_or(c.total_deaths())) + "\n";
    return out;
}

inline std::string serialize(const CohortSeries& s) {
    std::string out = "#series," + s.label() + "\n";
    for (const auto& snap : s.snapshots()) out += serialize(snap);
    return out;
}

inline std::string serialize(const ScalarTable& t) {
    std::string out = "#scalars," + t.name + "\n";
    if (!t.source.empty()) out += "source: " + t.source + "\n";
    out += "label,value\n";
    for (const auto& [l, v] : t.entries) out += l + "," + format_double(v) + "\n";
    return out;
}

} // namespace io
} // namespace cfrmed
