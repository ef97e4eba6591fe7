#pragma once

#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

#include "cfrmed/io.hpp"

namespace cfrmed {

enum class OutputFormat { table, json, csv };

inline std::optional<OutputFormat> output_format_from_string(std::string_view s) {
    if (s == "table") return OutputFormat::table;
    if (s == "json") return OutputFormat::json;
    if (s == "csv") return OutputFormat::csv;
    return std::nullopt;
}

/// Signed percentage points with one decimal, the display convention for
/// effects ("+2.2%", "-0.8%").
inline std::string percent1(double fraction) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%+.1f%%", fraction * 100.0);
    return buf;
}

/// Machine-format number: 12 significant digits, stable across runs.
inline std::string num12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline std::string num3e(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3e", v);
    return buf;
}

/// Provenance comment carried by table and csv outputs.
inline std::string provenance_line(const std::string& dataset_name, std::uint64_t hash) {
    return "# dataset " + dataset_name + " hash " + io::hex64(hash) + "\n";
}

} // namespace cfrmed
