#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "cfrmed/effects.hpp"
#include "cfrmed/errors.hpp"
#include "cfrmed/rng.hpp"

namespace cfrmed::stats {

/// Regularized incomplete beta I_x(a, b) by the standard continued fraction
/// (modified Lentz evaluation). Plenty of accuracy for p-values.
inline double incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    auto contfrac = [](double a_, double b_, double x_) {
        const int max_iter = 300;
        const double eps = 3e-16, tiny = 1e-300;
        double qab = a_ + b_, qap = a_ + 1.0, qam = a_ - 1.0;
        double c = 1.0, d = 1.0 - qab * x_ / qap;
        if (std::abs(d) < tiny) d = tiny;
        d = 1.0 / d;
        double h = d;
        for (int m = 1; m <= max_iter; ++m) {
            const double m2 = 2.0 * m;
            double aa = m * (b_ - m) * x_ / ((qam + m2) * (a_ + m2));
            d = 1.0 + aa * d;
            if (std::abs(d) < tiny) d = tiny;
            c = 1.0 + aa / c;
            if (std::abs(c) < tiny) c = tiny;
            d = 1.0 / d;
            h *= d * c;
            aa = -(a_ + m) * (qab + m) * x_ / ((a_ + m2) * (qap + m2));
            d = 1.0 + aa * d;
            if (std::abs(d) < tiny) d = tiny;
            c = 1.0 + aa / c;
            if (std::abs(c) < tiny) c = tiny;
            d = 1.0 / d;
            const double del = d * c;
            h *= del;
            if (std::abs(del - 1.0) < eps) break;
        }
        return h;
    };
    const double ln_bt = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
    const double bt = std::exp(ln_bt);
    if (x < (a + 1.0) / (a + b + 2.0)) return bt * contfrac(a, b, x) / a;
    return 1.0 - bt * contfrac(b, a, 1.0 - x) / b;
}

/// Two-sided p-value of a Student-t statistic with df degrees of freedom.
inline double student_t_two_sided_p(double t, double df) {
    if (!std::isfinite(t)) return 0.0;
    return incomplete_beta(df / 2.0, 0.5, df / (df + t * t));
}

/// Fractional (tie-averaged) ranks, 1-based.
inline std::vector<double> fractional_ranks(std::span<const double> xs) {
    const std::size_t n = xs.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && xs[idx[j + 1]] == xs[idx[i]]) ++j;
        const double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = avg;
        i = j + 1;
    }
    return ranks;
}

namespace detail {

inline double pearson_coefficient(std::span<const double> xs, std::span<const double> ys) {
    const std::size_t n = xs.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = xs[i] - mx, dy = ys[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0) throw ZeroVarianceError("first input");
    if (syy == 0.0) throw ZeroVarianceError("second input");
    return sxy / std::sqrt(sxx * syy);
}

} // namespace detail

enum class PMethod { t_approx, permutation };

struct PValueSpec {
    PMethod method = PMethod::t_approx;
    std::uint64_t seed = 0;
    int reps = 10000;
};

struct CorrelationResult {
    enum class Method { spearman, pearson } method;
    double coefficient = 0.0;
    double p_value = 1.0;
    PValueSpec p;
    std::size_t n = 0;
};

namespace detail {

// Two-sided permutation p with the add-one estimator, so p >= 1/(reps+1).
// Each permutation draws its own derived stream; the result is independent
// of batching or evaluation order.
template <typename Stat>
inline double permutation_p(std::span<const double> ys, double observed, const PValueSpec& spec, Stat&& stat) {
    std::vector<double> perm(ys.begin(), ys.end());
    const double threshold = std::abs(observed);
    int hits = 0;
    for (int r = 0; r < spec.reps; ++r) {
        SplitMix64 g(derive_seed(spec.seed, static_cast<std::uint64_t>(r)));
        perm.assign(ys.begin(), ys.end());
        for (std::size_t i = perm.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(g.next_below(i));
            std::swap(perm[i - 1], perm[j]);
        }
        if (std::abs(stat(perm)) >= threshold) ++hits;
    }
    return static_cast<double>(1 + hits) / static_cast<double>(spec.reps + 1);
}

} // namespace detail

/// Pearson product-moment correlation with a two-sided p-value
/// (t approximation with n-2 df, or seeded permutation).
inline CorrelationResult pearson(std::span<const double> xs, std::span<const double> ys, PValueSpec spec = {}) {
    if (xs.size() != ys.size()) throw Error("pearson: input length mismatch");
    if (xs.size() < 3) throw Error("pearson: need at least 3 observations");
    CorrelationResult result;
    result.method = CorrelationResult::Method::pearson;
    result.n = xs.size();
    result.p = spec;
    result.coefficient = detail::pearson_coefficient(xs, ys);
    const double df = static_cast<double>(xs.size() - 2);
    if (spec.method == PMethod::t_approx) {
        const double r = result.coefficient;
        if (std::abs(r) >= 1.0) {
            result.p_value = 0.0;
        } else {
            const double t = r * std::sqrt(df / (1.0 - r * r));
            result.p_value = student_t_two_sided_p(t, df);
        }
    } else {
        std::vector<double> x(xs.begin(), xs.end());
        result.p_value = detail::permutation_p(ys, result.coefficient, spec, [&](const std::vector<double>& perm) {
            return detail::pearson_coefficient(x, perm);
        });
    }
    return result;
}

/// Spearman rank correlation: Pearson on tie-averaged ranks.
inline CorrelationResult spearman(std::span<const double> xs, std::span<const double> ys, PValueSpec spec = {}) {
    if (xs.size() != ys.size()) throw Error("spearman: input length mismatch");
    if (xs.size() < 3) throw Error("spearman: need at least 3 observations");
    const std::vector<double> rx = fractional_ranks(xs);
    const std::vector<double> ry = fractional_ranks(ys);
    CorrelationResult result;
    result.method = CorrelationResult::Method::spearman;
    result.n = xs.size();
    result.p = spec;
    result.coefficient = detail::pearson_coefficient(rx, ry);
    const double df = static_cast<double>(xs.size() - 2);
    if (spec.method == PMethod::t_approx) {
        const double r = result.coefficient;
        if (std::abs(r) >= 1.0) {
            result.p_value = 0.0;
        } else {
            const double t = r * std::sqrt(df / (1.0 - r * r));
            result.p_value = student_t_two_sided_p(t, df);
        }
    } else {
        result.p_value = detail::permutation_p(ys, result.coefficient, spec, [&](const std::vector<double>& perm) {
            return detail::pearson_coefficient(rx, fractional_ranks(perm));
        });
    }
    return result;
}

/// Labels ordered best to worst under one criterion, with their scores.
struct Ranking {
    std::string criterion;
    std::vector<std::string> labels;  // best first
    std::vector<double> scores;       // aligned with labels
    bool has_ties = false;

    /// 1-based position of a label in the best-to-worst order.
    int position(const std::string& label) const {
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == label) return static_cast<int>(i + 1);
        throw UnknownLabelError(label, labels);
    }

    /// Tie-averaged ranks aligned with labels, for correlation inputs.
    std::vector<double> tie_averaged_ranks() const { return fractional_ranks(scores); }
};

/// Ranking by mean effect as a treatment (row means excluding the diagonal),
/// most negative first; ties share alphabetical order and are flagged.
inline Ranking rank_by_avg_treatment(const PairwiseEffectMatrix& matrix) {
    Ranking r;
    r.criterion = std::string("ascending mean ") + to_string(matrix.kind) + " as treatment";
    std::vector<double> means = matrix.row_means();
    std::vector<std::size_t> order(matrix.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (means[a] != means[b]) return means[a] < means[b];
        return matrix.labels[a] < matrix.labels[b];
    });
    for (std::size_t i : order) {
        r.labels.push_back(matrix.labels[i]);
        r.scores.push_back(means[i]);
    }
    for (std::size_t i = 1; i < r.scores.size(); ++i)
        if (r.scores[i] == r.scores[i - 1]) r.has_ties = true;
    return r;
}

/// rank in r1 minus rank in r2 per label, alphabetical output order.
inline std::vector<std::pair<std::string, int>> rank_delta(const Ranking& r1, const Ranking& r2) {
    std::vector<std::string> labels = r1.labels;
    std::sort(labels.begin(), labels.end());
    std::vector<std::pair<std::string, int>> out;
    out.reserve(labels.size());
    for (const auto& l : labels) out.emplace_back(l, r1.position(l) - r2.position(l));
    return out;
}

/// Count of ordered off-diagonal pairs whose effects have strictly opposite
/// signs in the two matrices. Exact zeros are excluded from the count and
/// reported separately.
struct SignDiscordance {
    int discordant = 0;
    int total = 0;
    int zero_pairs = 0;
    std::vector<std::pair<std::string, std::string>> pairs;  // (treatment, control)
};

inline SignDiscordance sign_discordance(const PairwiseEffectMatrix& m1, const PairwiseEffectMatrix& m2) {
    if (m1.labels != m2.labels) throw Error("sign_discordance: matrices must share label order");
    auto sign = [](double v) { return (v > 0.0) - (v < 0.0); };
    SignDiscordance out;
    const std::size_t n = m1.size();
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            if (r == c) continue;
            ++out.total;
            const int s1 = sign(m1.at(r, c));
            const int s2 = sign(m2.at(r, c));
            if (s1 == 0 || s2 == 0) {
                ++out.zero_pairs;
                continue;
            }
            if (s1 == -s2) {
                ++out.discordant;
                out.pairs.emplace_back(m1.labels[r], m1.labels[c]);
            }
        }
    }
    return out;
}

} // namespace cfrmed::stats
