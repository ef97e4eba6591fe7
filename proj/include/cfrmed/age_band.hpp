#pragma once

#include <charconv>
#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cfrmed/errors.hpp"

namespace cfrmed {

/// One age interval. Closed [lower, upper] in whole years, or open-ended
/// ("80+") for the terminal band. The canonical label is derived from the
/// bounds, so parse(label).label() == label holds by construction.
struct AgeBand {
    int lower = 0;
    std::optional<int> upper;  // nullopt = open-ended

    bool open_ended() const { return !upper.has_value(); }

    std::string label() const {
        if (open_ended()) return std::to_string(lower) + "+";
        return std::to_string(lower) + "-" + std::to_string(*upper);
    }

    static std::optional<AgeBand> try_parse(std::string_view s) {
        auto num = [](std::string_view t, int& out) {
            if (t.empty()) return false;
            auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
            return ec == std::errc() && p == t.data() + t.size();
        };
        AgeBand b;
        if (!s.empty() && s.back() == '+') {
            if (!num(s.substr(0, s.size() - 1), b.lower)) return std::nullopt;
            if (b.lower < 0) return std::nullopt;
            return b;
        }
        auto dash = s.find('-');
        if (dash == std::string_view::npos) return std::nullopt;
        int hi = 0;
        if (!num(s.substr(0, dash), b.lower) || !num(s.substr(dash + 1), hi)) return std::nullopt;
        if (b.lower < 0 || hi < b.lower) return std::nullopt;
        b.upper = hi;
        return b;
    }

    static AgeBand parse(std::string_view s) {
        auto b = try_parse(s);
        if (!b) throw UnknownBandError(std::string(s));
        return *b;
    }

    auto operator<=>(const AgeBand&) const = default;
};

/// Ordered, disjoint set of age bands. Schemas either match exactly or any
/// cross-cohort comparison fails; there is no automatic re-binning.
class BandSchema {
public:
    BandSchema() = default;

    explicit BandSchema(std::vector<AgeBand> bands) : bands_(std::move(bands)) {
        if (bands_.empty()) throw Error("band schema must not be empty");
        for (std::size_t i = 0; i + 1 < bands_.size(); ++i) {
            const AgeBand& a = bands_[i];
            const AgeBand& b = bands_[i + 1];
            if (a.open_ended()) throw Error("open-ended band '" + a.label() + "' must be terminal");
            if (*a.upper >= b.lower) throw Error("bands '" + a.label() + "' and '" + b.label() + "' overlap or are unsorted");
        }
    }

    static BandSchema from_labels(const std::vector<std::string>& labels) {
        std::vector<AgeBand> bands;
        bands.reserve(labels.size());
        for (const auto& l : labels) bands.push_back(AgeBand::parse(l));
        return BandSchema(std::move(bands));
    }

    /// The 10-year grouping used by most of the bundled data.
    static const BandSchema& ten_year() {
        static const BandSchema schema = from_labels(
            {"0-9", "10-19", "20-29", "30-39", "40-49", "50-59", "60-69", "70-79", "80+"});
        return schema;
    }

    const std::vector<AgeBand>& bands() const { return bands_; }
    std::size_t size() const { return bands_.size(); }
    const AgeBand& operator[](std::size_t i) const { return bands_[i]; }

    std::optional<std::size_t> index_of(const AgeBand& band) const {
        for (std::size_t i = 0; i < bands_.size(); ++i)
            if (bands_[i] == band) return i;
        return std::nullopt;
    }

    std::vector<std::string> labels() const {
        std::vector<std::string> out;
        out.reserve(bands_.size());
        for (const auto& b : bands_) out.push_back(b.label());
        return out;
    }

    bool operator==(const BandSchema& other) const { return bands_ == other.bands_; }

private:
    std::vector<AgeBand> bands_;
};

/// Returns the shared schema when the two are identical, otherwise throws.
inline BandSchema align(const BandSchema& a, const BandSchema& b) {
    if (a == b) return a;
    throw SchemaMismatchError(a.labels(), b.labels());
}

} // namespace cfrmed
