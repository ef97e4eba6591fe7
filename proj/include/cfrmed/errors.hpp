#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace cfrmed {

/// Base class for all domain errors raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Two band schemas that were required to be identical are not.
class SchemaMismatchError : public Error {
public:
    SchemaMismatchError(std::vector<std::string> left, std::vector<std::string> right)
        : Error(make_message(left, right)), left_labels(std::move(left)), right_labels(std::move(right)) {}

    std::vector<std::string> left_labels;
    std::vector<std::string> right_labels;

private:
    static std::string make_message(const std::vector<std::string>& l, const std::vector<std::string>& r) {
        return "band schema mismatch: {" + join(l) + "} vs {" + join(r) + "}";
    }
    static std::string join(const std::vector<std::string>& v) {
        std::string out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) out += ",";
            out += v[i];
        }
        return out;
    }
};

/// A rate was requested for a band with zero cases.
class UndefinedRateError : public Error {
public:
    UndefinedRateError(std::string cohort, std::string band)
        : Error("undefined rate: cohort '" + cohort + "' has no cases in band '" + band + "'"),
          cohort_label(std::move(cohort)), band_label(std::move(band)) {}

    std::string cohort_label;
    std::string band_label;
};

/// A band label not present in the cohort's schema.
class UnknownBandError : public Error {
public:
    explicit UnknownBandError(const std::string& band)
        : Error("unknown band '" + band + "'"), band_label(band) {}

    std::string band_label;
};

/// A cohort/series/scalar label not present in the registry.
class UnknownLabelError : public Error {
public:
    UnknownLabelError(const std::string& label, std::vector<std::string> available)
        : Error(make_message(label, available)), label(label), suggestions(std::move(available)) {}

    std::string label;
    std::vector<std::string> suggestions;

private:
    static std::string make_message(const std::string& label, const std::vector<std::string>& avail) {
        std::string msg = "unknown label '" + label + "'";
        if (!avail.empty()) {
            msg += "; available:";
            for (const auto& a : avail) msg += " '" + a + "'";
        }
        return msg;
    }
};

class UnknownDatasetError : public Error {
public:
    explicit UnknownDatasetError(const std::string& name)
        : Error("unknown bundled dataset '" + name + "'"), name(name) {}

    std::string name;
};

/// Correlation input with zero variance has no defined coefficient.
class ZeroVarianceError : public Error {
public:
    explicit ZeroVarianceError(const std::string& which)
        : Error("zero variance in " + which + ": correlation coefficient undefined") {}
};

class InvalidScmError : public Error {
public:
    explicit InvalidScmError(const std::string& what) : Error("invalid scm: " + what) {}
};

/// Raised when a file cannot be read or has a structurally unusable shape.
/// Row-level anomalies are reported through ValidationReport instead.
class ParseError : public Error {
public:
    explicit ParseError(const std::string& what) : Error(what) {}
};

} // namespace cfrmed
