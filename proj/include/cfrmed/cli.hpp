#pragma once

#include <cstdint>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cfrmed/effects.hpp"
#include "cfrmed/registry.hpp"
#include "cfrmed/report.hpp"
#include "cfrmed/scm.hpp"
#include "cfrmed/stats.hpp"

namespace cfrmed::cli {

using json = nlohmann::ordered_json;

inline constexpr int exit_ok = 0;
inline constexpr int exit_suite_failure = 1;
inline constexpr int exit_usage = 2;

namespace detail {

inline json estimate_json(const EffectEstimate& e) {
    json j;
    j["kind"] = to_string(e.kind);
    j["control"] = e.control;
    j["treatment"] = e.treatment;
    if (e.band) j["band"] = e.band->label();
    if (e.reference) j["reference"] = *e.reference;
    j["value"] = e.value;
    j["display"] = percent1(e.value);
    j["undefined_band_policy_used"] = e.undefined_band_policy_used;
    return j;
}

inline json dataset_json(const DatasetRegistry& reg) {
    json j;
    j["name"] = reg.name();
    j["hash"] = io::hex64(reg.content_hash());
    return j;
}

inline UndefinedBandPolicy parse_policy(const std::string& s) {
    if (s == "error") return UndefinedBandPolicy::error_on_undefined;
    if (s == "zero") return UndefinedBandPolicy::coerce_to_zero;
    throw Error("unknown undefined-band policy '" + s + "' (expected error|zero)");
}

inline OutputFormat parse_format(const std::string& s) {
    auto f = output_format_from_string(s);
    if (!f) throw Error("unknown format '" + s + "' (expected table|json|csv)");
    return *f;
}

} // namespace detail

struct EffectsArgs {
    std::vector<std::string> data;
    std::string control;
    std::string treatment;
    std::string band;
    std::string reference;
    std::string undefined_band = "error";
    std::string format = "table";
};

inline int cmd_effects(const EffectsArgs& args, std::ostream& out) {
    DatasetRegistry reg = load_merged(args.data);
    const StratifiedCohort& control = reg.cohort(args.control);
    const StratifiedCohort& treatment = reg.cohort(args.treatment);
    const UndefinedBandPolicy policy = detail::parse_policy(args.undefined_band);
    const OutputFormat format = detail::parse_format(args.format);

    EffectEstimate e_tce = tce(control, treatment);
    EffectEstimate e_nde = nde(control, treatment, policy);
    EffectEstimate e_nie = nie(control, treatment, policy);
    EffectEstimate e_mod = moderation_residual(control, treatment, policy);
    auto residuals = subtractivity_check(control, treatment, policy);
    std::optional<EffectEstimate> e_cde;
    if (!args.band.empty()) e_cde = cde(control, treatment, AgeBand::parse(args.band));
    std::optional<EffectEstimate> e_ecde;
    if (!args.reference.empty()) e_ecde = expected_cde(control, treatment, reg.cohort(args.reference), policy);

    if (format == OutputFormat::json) {
        json j;
        j["command"] = "effects";
        j["dataset"] = detail::dataset_json(reg);
        j["flags"] = {{"control", args.control},
                      {"treatment", args.treatment},
                      {"band", args.band},
                      {"reference", args.reference},
                      {"undefined_band", args.undefined_band},
                      {"format", args.format}};
        json r;
        r["tce"] = detail::estimate_json(e_tce);
        if (e_cde) r["cde"] = detail::estimate_json(*e_cde);
        r["nde"] = detail::estimate_json(e_nde);
        r["nie"] = detail::estimate_json(e_nie);
        if (e_ecde) r["expected_cde"] = detail::estimate_json(*e_ecde);
        r["moderation_residual"] = detail::estimate_json(e_mod);
        r["subtractivity_residuals"] = {residuals.first, residuals.second};
        j["results"] = r;
        out << j.dump(2) << "\n";
        return exit_ok;
    }
    if (format == OutputFormat::csv) {
        out << provenance_line(reg.name(), reg.content_hash());
        out << "effect,control,treatment,band,reference,value,display,undefined_band_policy_used\n";
        auto row = [&](const EffectEstimate& e) {
            out << to_string(e.kind) << "," << e.control << "," << e.treatment << ","
                << (e.band ? e.band->label() : "") << "," << (e.reference ? *e.reference : "") << ","
                << num12(e.value) << "," << percent1(e.value) << ","
                << (e.undefined_band_policy_used ? "true" : "false") << "\n";
        };
        row(e_tce);
        if (e_cde) row(*e_cde);
        row(e_nde);
        row(e_nie);
        if (e_ecde) row(*e_ecde);
        row(e_mod);
        out << "SubtractivityResidual," << control.label() << "," << treatment.label() << ",,," << num12(residuals.first)
            << ",,false\n";
        out << "SubtractivityResidual," << control.label() << "," << treatment.label() << ",,," << num12(residuals.second)
            << ",,false\n";
        return exit_ok;
    }
    out << provenance_line(reg.name(), reg.content_hash());
    out << "control: " << control.label() << "\n";
    out << "treatment: " << treatment.label() << "\n";
    auto line = [&](const std::string& name, const EffectEstimate& e) {
        out << name << "  ";
        for (std::size_t i = name.size() + 2; i < 26; ++i) out << ' ';
        out << percent1(e.value);
        if (e.undefined_band_policy_used) out << "  [zero-coerced bands]";
        out << "\n";
    };
    line("TCE", e_tce);
    if (e_cde) line("CDE(" + e_cde->band->label() + ")", *e_cde);
    line("NDE", e_nde);
    line("NIE", e_nie);
    if (e_ecde) line("ExpectedCDE(ref=" + *e_ecde->reference + ")", *e_ecde);
    line("moderation residual", e_mod);
    out << "subtractivity residuals   " << num3e(residuals.first) << " " << num3e(residuals.second) << "\n";
    return exit_ok;
}

struct TraceArgs {
    std::vector<std::string> data;
    std::string control;
    std::string undefined_band = "error";
    std::string format = "table";
};

inline int cmd_trace(const TraceArgs& args, std::ostream& out) {
    DatasetRegistry reg = load_merged(args.data);
    const CohortSeries& series = reg.one_series();
    const StratifiedCohort& control = reg.cohort(args.control);
    const UndefinedBandPolicy policy = detail::parse_policy(args.undefined_band);
    const OutputFormat format = detail::parse_format(args.format);
    EffectTrace tr = trace(control, series, policy);

    if (format == OutputFormat::json) {
        json j;
        j["command"] = "trace";
        j["dataset"] = detail::dataset_json(reg);
        j["flags"] = {{"control", args.control}, {"undefined_band", args.undefined_band}, {"format", args.format}};
        j["control"] = tr.control;
        j["series"] = tr.series_label;
        json pts = json::array();
        for (const auto& p : tr.points)
            pts.push_back({{"date", p.date.iso()}, {"tce", p.tce}, {"nde", p.nde}, {"nie", p.nie}});
        j["points"] = pts;
        out << j.dump(2) << "\n";
        return exit_ok;
    }
    if (format == OutputFormat::csv) {
        out << provenance_line(reg.name(), reg.content_hash());
        out << "date,tce,nde,nie\n";
        for (const auto& p : tr.points)
            out << p.date.iso() << "," << num12(p.tce) << "," << num12(p.nde) << "," << num12(p.nie) << "\n";
        return exit_ok;
    }
    out << provenance_line(reg.name(), reg.content_hash());
    out << "control: " << tr.control << "  series: " << tr.series_label << "\n";
    out << "date        tce     nde     nie\n";
    for (const auto& p : tr.points)
        out << p.date.iso() << "  " << percent1(p.tce) << "  " << percent1(p.nde) << "  " << percent1(p.nie) << "\n";
    return exit_ok;
}

struct MatrixArgs {
    std::vector<std::string> data;
    std::string kind = "tce";
    std::string format = "table";
};

inline int cmd_matrix(const MatrixArgs& args, std::ostream& out) {
    DatasetRegistry reg = load_merged(args.data);
    auto kind = effect_kind_from_string(args.kind);
    if (!kind) throw Error("unknown effect kind '" + args.kind + "' (expected tce|nde|nie)");
    PairwiseEffectMatrix m = pairwise_matrix(reg.cohorts_in_label_order(), *kind);
    const OutputFormat format = detail::parse_format(args.format);

    if (format == OutputFormat::json) {
        json j;
        j["command"] = "matrix";
        j["dataset"] = detail::dataset_json(reg);
        j["flags"] = {{"kind", args.kind}, {"format", args.format}};
        j["kind"] = to_string(m.kind);
        j["ordering_rule"] = m.ordering_rule;
        j["labels"] = m.labels;
        json rows = json::array();
        json flags = json::array();
        for (std::size_t r = 0; r < m.size(); ++r) {
            json row = json::array(), frow = json::array();
            for (std::size_t c = 0; c < m.size(); ++c) {
                row.push_back(m.at(r, c));
                frow.push_back(m.coerced_at(r, c));
            }
            rows.push_back(row);
            flags.push_back(frow);
        }
        j["values"] = rows;
        j["coerced"] = flags;
        out << j.dump(2) << "\n";
        return exit_ok;
    }
    if (format == OutputFormat::csv) {
        out << provenance_line(reg.name(), reg.content_hash());
        out << "treatment/control";
        for (const auto& l : m.labels) out << "," << l;
        out << "\n";
        for (std::size_t r = 0; r < m.size(); ++r) {
            out << m.labels[r];
            for (std::size_t c = 0; c < m.size(); ++c) out << "," << num12(m.at(r, c));
            out << "\n";
        }
        return exit_ok;
    }
    out << provenance_line(reg.name(), reg.content_hash());
    out << "# kind " << to_string(m.kind) << "; rows = treatment, columns = control; percentage points\n";
    std::size_t width = 12;
    for (const auto& l : m.labels) width = std::max(width, l.size() + 1);
    auto pad = [&](const std::string& s) {
        out << s;
        for (std::size_t i = s.size(); i < width; ++i) out << ' ';
    };
    bool any_coerced = false;
    pad("");
    for (const auto& l : m.labels) pad(l);
    out << "\n";
    for (std::size_t r = 0; r < m.size(); ++r) {
        pad(m.labels[r]);
        for (std::size_t c = 0; c < m.size(); ++c) {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%+.1f", m.at(r, c) * 100.0);
            std::string cell(buf);
            if (m.coerced_at(r, c)) {
                cell += "*";
                any_coerced = true;
            }
            pad(cell);
        }
        out << "\n";
    }
    if (any_coerced) out << "# * = cell coerced an empty band's rate to zero\n";
    return exit_ok;
}

struct CorrelateArgs {
    std::vector<std::string> data;
    std::string test;
    std::string p_method = "t";
    std::uint64_t seed = 0;
    int reps = 10000;
    std::string format = "table";
};

inline int cmd_correlate(const CorrelateArgs& args, std::ostream& out) {
    DatasetRegistry reg = load_merged(args.data);
    stats::PValueSpec spec;
    if (args.p_method == "t") {
        spec.method = stats::PMethod::t_approx;
    } else if (args.p_method == "permutation") {
        spec.method = stats::PMethod::permutation;
    } else {
        throw Error("unknown p-value method '" + args.p_method + "' (expected t|permutation)");
    }
    spec.seed = args.seed;
    spec.reps = args.reps;

    auto cohorts = reg.cohorts_in_label_order();
    PairwiseEffectMatrix m_nde = pairwise_matrix(cohorts, EffectKind::nde);
    PairwiseEffectMatrix m_nie = pairwise_matrix(cohorts, EffectKind::nie);
    stats::Ranking r_nde = stats::rank_by_avg_treatment(m_nde);
    stats::Ranking r_nie = stats::rank_by_avg_treatment(m_nie);

    stats::CorrelationResult result;
    std::optional<stats::SignDiscordance> discordance;

    if (args.test == "nde-vs-nie-rank") {
        std::vector<std::string> labels = r_nde.labels;
        std::sort(labels.begin(), labels.end());
        std::vector<double> xs, ys;
        auto rank_of = [](const stats::Ranking& r, const std::string& l) { return static_cast<double>(r.position(l)); };
        for (const auto& l : labels) {
            xs.push_back(rank_of(r_nde, l));
            ys.push_back(rank_of(r_nie, l));
        }
        result = stats::spearman(xs, ys, spec);
    } else if (args.test == "nie-rank-vs-median-age") {
        DatasetRegistry ages_registry = load_bundled("median_ages");
        const ScalarTable& ages = ages_registry.scalar_table("median_ages");
        std::vector<std::string> labels = r_nie.labels;
        std::sort(labels.begin(), labels.end());
        std::vector<double> xs, ys;
        for (const auto& l : labels) {
            auto v = ages.value_of(l);
            if (!v) throw UnknownLabelError(l, ages.labels());
            xs.push_back(static_cast<double>(r_nie.position(l)));
            ys.push_back(*v);
        }
        result = stats::spearman(xs, ys, spec);
    } else if (args.test == "pairwise-nde-vs-nie") {
        PairwiseEffectMatrix aligned = reordered(m_nie, m_nde.labels);
        std::vector<double> xs, ys;
        for (std::size_t r = 0; r < m_nde.size(); ++r)
            for (std::size_t c = 0; c < m_nde.size(); ++c) {
                if (r == c) continue;
                xs.push_back(m_nde.at(r, c));
                ys.push_back(aligned.at(r, c));
            }
        result = stats::pearson(xs, ys, spec);
        discordance = stats::sign_discordance(m_nde, aligned);
    } else {
        throw Error("unknown test '" + args.test +
                    "' (expected nde-vs-nie-rank|nie-rank-vs-median-age|pairwise-nde-vs-nie)");
    }

    const OutputFormat format = detail::parse_format(args.format);
    const std::string method_name =
        result.method == stats::CorrelationResult::Method::spearman ? "spearman" : "pearson";
    const std::string p_desc = spec.method == stats::PMethod::t_approx
                                   ? "t_approx"
                                   : "permutation(seed=" + std::to_string(spec.seed) +
                                         ",reps=" + std::to_string(spec.reps) + ")";

    if (format == OutputFormat::json) {
        json j;
        j["command"] = "correlate";
        j["dataset"] = detail::dataset_json(reg);
        j["flags"] = {{"test", args.test}, {"p", args.p_method}, {"seed", args.seed}, {"reps", args.reps},
                      {"format", args.format}};
        j["method"] = method_name;
        j["coefficient"] = result.coefficient;
        j["p_value"] = result.p_value;
        j["p_method"] = p_desc;
        j["n"] = result.n;
        if (discordance) {
            j["discordant_pairs"] = discordance->discordant;
            j["total_pairs"] = discordance->total;
            j["zero_pairs"] = discordance->zero_pairs;
        }
        out << j.dump(2) << "\n";
        return exit_ok;
    }
    if (format == OutputFormat::csv) {
        out << provenance_line(reg.name(), reg.content_hash());
        out << "test,method,n,coefficient,p_value,p_method";
        if (discordance) out << ",discordant_pairs,total_pairs,zero_pairs";
        out << "\n";
        out << args.test << "," << method_name << "," << result.n << "," << num12(result.coefficient) << ","
            << num12(result.p_value) << "," << p_desc;
        if (discordance) out << "," << discordance->discordant << "," << discordance->total << "," << discordance->zero_pairs;
        out << "\n";
        return exit_ok;
    }
    out << provenance_line(reg.name(), reg.content_hash());
    out << "test: " << args.test << "\n";
    out << "method: " << method_name << "\n";
    out << "n: " << result.n << "\n";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", result.coefficient);
    out << "coefficient: " << buf << "\n";
    std::snprintf(buf, sizeof(buf), "%.6g", result.p_value);
    out << "p_value: " << buf << "\n";
    out << "p_method: " << p_desc << "\n";
    if (discordance)
        out << "discordant_pairs: " << discordance->discordant << " of " << discordance->total
            << " (zero cells: " << discordance->zero_pairs << ")\n";
    return exit_ok;
}

struct SimpsonArgs {
    std::vector<std::string> data;
    std::string control;
    std::string treatment;
    std::string format = "table";
};

inline int cmd_simpson(const SimpsonArgs& args, std::ostream& out) {
    DatasetRegistry reg = load_merged(args.data);
    const StratifiedCohort& control = reg.cohort(args.control);
    const StratifiedCohort& treatment = reg.cohort(args.treatment);
    SimpsonVerdict v = simpson_verdict(control, treatment);
    const OutputFormat format = detail::parse_format(args.format);
    auto sign_text = [](const std::optional<int>& s) -> std::string {
        if (!s) return "skipped";
        if (*s > 0) return "+";
        if (*s < 0) return "-";
        return "0";
    };

    if (format == OutputFormat::json) {
        json j;
        j["command"] = "simpson";
        j["dataset"] = detail::dataset_json(reg);
        j["flags"] = {{"control", args.control}, {"treatment", args.treatment}, {"format", args.format}};
        j["control"] = v.control;
        j["treatment"] = v.treatment;
        json bands = json::array();
        for (std::size_t i = 0; i < control.schema().size(); ++i)
            bands.push_back({{"band", control.schema()[i].label()}, {"cde_sign", sign_text(v.per_band_cde_signs[i])}});
        j["per_band_cde_signs"] = bands;
        j["total_sign"] = v.total_sign;
        j["is_reversal"] = v.is_reversal;
        json skipped = json::array();
        for (const auto& b : v.skipped_bands) skipped.push_back(b.label());
        j["skipped_bands"] = skipped;
        out << j.dump(2) << "\n";
        return exit_ok;
    }
    if (format == OutputFormat::csv) {
        out << provenance_line(reg.name(), reg.content_hash());
        out << "band,cde_sign\n";
        for (std::size_t i = 0; i < control.schema().size(); ++i)
            out << control.schema()[i].label() << "," << sign_text(v.per_band_cde_signs[i]) << "\n";
        out << "total," << (v.total_sign > 0 ? "+" : v.total_sign < 0 ? "-" : "0") << "\n";
        out << "reversal," << (v.is_reversal ? "true" : "false") << "\n";
        return exit_ok;
    }
    out << provenance_line(reg.name(), reg.content_hash());
    out << "control: " << v.control << "\n";
    out << "treatment: " << v.treatment << "\n";
    out << "band      cde_sign\n";
    for (std::size_t i = 0; i < control.schema().size(); ++i) {
        const std::string l = control.schema()[i].label();
        out << l;
        for (std::size_t k = l.size(); k < 10; ++k) out << ' ';
        out << sign_text(v.per_band_cde_signs[i]) << "\n";
    }
    out << "total     " << (v.total_sign > 0 ? "+" : v.total_sign < 0 ? "-" : "0") << "\n";
    out << "reversal: " << (v.is_reversal ? "yes" : "no") << "\n";
    out << "skipped_bands:";
    if (v.skipped_bands.empty()) {
        out << " (none)";
    } else {
        for (const auto& b : v.skipped_bands) out << " " << b.label();
    }
    out << "\n";
    return exit_ok;
}

struct OracleArgs {
    int k = 9;
    int instances = 1000;
    std::uint64_t seed = 20200309;
    std::int64_t sample_n = 0;
    std::string scm_path;
};

inline int cmd_validate_oracle(const OracleArgs& args, std::ostream& out) {
    constexpr double tol = 1e-12;
    auto max_discrepancy = [](const scm::ScmEffects& a, const scm::ScmEffects& b) {
        double d = std::max({std::abs(a.tce - b.tce), std::abs(a.nde - b.nde), std::abs(a.nie - b.nie)});
        for (std::size_t x = 0; x < a.cde.size(); ++x) d = std::max(d, std::abs(a.cde[x] - b.cde[x]));
        return d;
    };

    if (!args.scm_path.empty()) {
        scm::DiscreteScm m = scm::parse_scm_file(args.scm_path);
        scm::ScmEffects exact = scm::exact_effects(m);
        scm::ScmEffects formula = scm::mediation_formula_effects(m);
        const double d = max_discrepancy(exact, formula);
        out << "scm file: " << args.scm_path << " (k=" << m.mediator_arity << ")\n";
        out << "TCE " << num12(exact.tce) << "  NDE " << num12(exact.nde) << "  NIE " << num12(exact.nie) << "\n";
        out << "max |exact - mediation formula| discrepancy: " << num3e(d) << "\n";
        out << "result: " << (d < tol ? "PASS" : "FAIL") << "\n";
        return d < tol ? exit_ok : exit_suite_failure;
    }

    if (args.k < 1) throw Error("--k must be >= 1");
    if (args.instances < 1) throw Error("--instances must be >= 1");

    double worst = 0.0;
    for (int i = 0; i < args.instances; ++i) {
        SplitMix64 g(derive_seed(args.seed, static_cast<std::uint64_t>(i)));
        scm::DiscreteScm m = scm::random_scm(static_cast<std::size_t>(args.k), g);
        worst = std::max(worst, max_discrepancy(scm::exact_effects(m), scm::mediation_formula_effects(m)));
    }

    // adversarial corners: deterministic mechanisms, degenerate rows, k=1
    std::vector<scm::DiscreteScm> corners;
    corners.push_back(scm::moderation_example());
    {
        scm::DiscreteScm m;  // mediator ignored by outcome
        m.mediator_arity = 3;
        m.p_mediator[0] = {0.2, 0.3, 0.5};
        m.p_mediator[1] = {0.6, 0.1, 0.3};
        m.p_outcome[0] = {0.4, 0.4, 0.4};
        m.p_outcome[1] = {0.7, 0.7, 0.7};
        corners.push_back(m);
    }
    {
        scm::DiscreteScm m;  // no treatment->mediator effect
        m.mediator_arity = 3;
        m.p_mediator[0] = {0.25, 0.5, 0.25};
        m.p_mediator[1] = {0.25, 0.5, 0.25};
        m.p_outcome[0] = {0.0, 0.5, 1.0};
        m.p_outcome[1] = {0.1, 0.6, 0.9};
        corners.push_back(m);
    }
    {
        scm::DiscreteScm m;  // degenerate mediator rows
        m.mediator_arity = 4;
        m.p_mediator[0] = {1.0, 0.0, 0.0, 0.0};
        m.p_mediator[1] = {0.0, 0.0, 0.0, 1.0};
        m.p_outcome[0] = {0.0, 1.0, 0.5, 1.0};
        m.p_outcome[1] = {1.0, 0.0, 0.5, 0.0};
        corners.push_back(m);
    }
    {
        scm::DiscreteScm m;  // single mediator level
        m.mediator_arity = 1;
        m.p_mediator[0] = {1.0};
        m.p_mediator[1] = {1.0};
        m.p_outcome[0] = {0.3};
        m.p_outcome[1] = {0.8};
        corners.push_back(m);
    }
    for (const auto& m : corners)
        worst = std::max(worst, max_discrepancy(scm::exact_effects(m), scm::mediation_formula_effects(m)));

    scm::ScmEffects preset = scm::exact_effects(scm::moderation_example());
    const bool preset_ok = preset.tce == 1.0 && preset.nde == 0.0 && preset.nie == 0.0;

    out << "oracle validation\n";
    out << "k: " << args.k << "\n";
    out << "instances: " << args.instances << "\n";
    out << "seed: " << args.seed << "\n";
    out << "corner cases: " << corners.size() << "\n";
    out << "max |exact - mediation formula| discrepancy: " << num3e(worst) << "\n";
    out << "moderation preset: TCE=" << num12(preset.tce) << " NDE=" << num12(preset.nde) << " NIE="
        << num12(preset.nie) << (preset_ok ? " [ok]" : " [MISMATCH]") << "\n";

    bool pass = worst < tol && preset_ok;

    if (args.sample_n > 0) {
        const int n_models = 5;
        const int reps = 200;
        bool sampling_ok = true;
        out << "sampling recovery: n=" << args.sample_n << " per arm, " << n_models << " models, " << reps
            << " replicates each\n";
        for (int i = 0; i < n_models; ++i) {
            SplitMix64 g(derive_seed(args.seed ^ 0x5eedULL, static_cast<std::uint64_t>(i)));
            scm::DiscreteScm m = scm::random_scm(static_cast<std::size_t>(args.k), g);
            scm::ScmEffects exact = scm::exact_effects(m);
            std::vector<double> est_tce(reps), est_nde(reps), est_nie(reps);
            for (int r = 0; r < reps; ++r) {
                auto pair = scm::sample_cohorts(m, args.sample_n, derive_seed(args.seed + 17, static_cast<std::uint64_t>(i * reps + r)));
                est_tce[r] = tce(pair.control, pair.treatment).value;
                est_nde[r] = nde(pair.control, pair.treatment, UndefinedBandPolicy::coerce_to_zero).value;
                est_nie[r] = nie(pair.control, pair.treatment, UndefinedBandPolicy::coerce_to_zero).value;
            }
            auto sd = [&](const std::vector<double>& v) {
                double mean = 0.0;
                for (double x : v) mean += x;
                mean /= static_cast<double>(v.size());
                double acc = 0.0;
                for (double x : v) acc += (x - mean) * (x - mean);
                return std::sqrt(acc / static_cast<double>(v.size() - 1));
            };
            const double err_tce = std::abs(est_tce[0] - exact.tce);
            const double err_nde = std::abs(est_nde[0] - exact.nde);
            const double err_nie = std::abs(est_nie[0] - exact.nie);
            const bool within = err_tce <= 3.0 * sd(est_tce) && err_nde <= 3.0 * sd(est_nde) && err_nie <= 3.0 * sd(est_nie);
            sampling_ok = sampling_ok && within;
            out << "  model " << (i + 1) << ": |err| tce=" << num3e(err_tce) << " nde=" << num3e(err_nde)
                << " nie=" << num3e(err_nie) << " within 3 SE: " << (within ? "yes" : "NO") << "\n";
        }
        out << "sampling recovery: " << (sampling_ok ? "PASS" : "FAIL") << "\n";
        pass = pass && sampling_ok;
    }

    out << "result: " << (pass ? "PASS" : "FAIL") << "\n";
    return pass ? exit_ok : exit_suite_failure;
}

struct DatasetsArgs {
    bool list = false;
    std::string show_name;
    std::string format = "table";
};

inline int cmd_datasets(const DatasetsArgs& args, std::ostream& out) {
    if (args.list) {
        for (const auto& name : bundled_dataset_names()) {
            DatasetRegistry reg = load_bundled(name);
            out << name << ": ";
            bool first = true;
            auto sep = [&]() {
                if (!first) out << ", ";
                first = false;
            };
            if (!reg.cohorts().empty()) {
                sep();
                out << reg.cohorts().size() << (reg.cohorts().size() == 1 ? " cohort" : " cohorts");
            }
            for (const auto& [label, series] : reg.series()) {
                sep();
                out << "series " << label << " (" << series.snapshots().size() << " snapshots)";
            }
            for (const auto& [sname, table] : reg.scalars()) {
                sep();
                out << "scalar table " << sname << " (" << table.entries.size() << " entries)";
            }
            Date lo{9999, 12, 31}, hi{0, 1, 1};
            bool any_date = false;
            auto fold = [&](const StratifiedCohort& c) {
                any_date = true;
                lo = std::min(lo, c.report_date());
                hi = std::max(hi, c.report_date());
            };
            for (const auto& [label, c] : reg.cohorts()) fold(c);
            for (const auto& [label, s] : reg.series())
                for (const auto& snap : s.snapshots()) fold(snap);
            if (any_date) out << " [" << lo.iso() << " to " << hi.iso() << "]";
            out << "\n";
        }
        return exit_ok;
    }

    DatasetRegistry reg = load_bundled(args.show_name);
    ValidationReport report = validate_registry(reg);
    const OutputFormat format = detail::parse_format(args.format);

    if (format == OutputFormat::json) {
        json j;
        j["command"] = "datasets show";
        j["dataset"] = detail::dataset_json(reg);
        json cs = json::array();
        for (const auto& [label, c] : reg.cohorts())
            cs.push_back({{"label", label},
                          {"date", c.report_date().iso()},
                          {"cases", c.total_cases()},
                          {"deaths", c.total_deaths()},
                          {"source", c.source()}});
        j["cohorts"] = cs;
        json ss = json::array();
        for (const auto& [label, s] : reg.series())
            ss.push_back({{"label", label},
                          {"snapshots", s.snapshots().size()},
                          {"from", s.snapshots().front().report_date().iso()},
                          {"to", s.snapshots().back().report_date().iso()}});
        j["series"] = ss;
        json ts = json::array();
        for (const auto& [name, t] : reg.scalars()) {
            json entries = json::array();
            for (const auto& [l, v] : t.entries) entries.push_back({{"label", l}, {"value", v}});
            ts.push_back({{"name", name}, {"source", t.source}, {"entries", entries}});
        }
        j["scalars"] = ts;
        json errs = json::array(), warns = json::array();
        for (const auto& e : report.errors) errs.push_back({{"location", e.location}, {"message", e.message}});
        for (const auto& w : report.warnings) warns.push_back({{"location", w.location}, {"message", w.message}});
        j["validation"] = {{"errors", errs}, {"warnings", warns}};
        out << j.dump(2) << "\n";
        return exit_ok;
    }

    out << provenance_line(reg.name(), reg.content_hash());
    std::int64_t total_cases = 0, total_deaths = 0;
    if (!reg.cohorts().empty()) {
        out << "cohorts: " << reg.cohorts().size() << "\n";
        for (const auto& [label, c] : reg.cohorts()) {
            out << "  " << label;
            for (std::size_t i = label.size(); i < 26; ++i) out << ' ';
            out << c.report_date().iso() << "  cases " << c.total_cases() << "  deaths " << c.total_deaths()
                << "  source " << c.source() << "\n";
            total_cases += c.total_cases();
            total_deaths += c.total_deaths();
        }
        out << "totals: cases " << total_cases << " deaths " << total_deaths << "\n";
    }
    for (const auto& [label, s] : reg.series())
        out << "series: " << label << " (" << s.snapshots().size() << " snapshots, "
            << s.snapshots().front().report_date().iso() << " to " << s.snapshots().back().report_date().iso()
            << ")\n";
    for (const auto& [name, t] : reg.scalars()) {
        out << "scalars: " << name << " (" << t.entries.size() << " entries)";
        if (!t.source.empty()) out << "  source " << t.source;
        out << "\n";
        for (const auto& [l, v] : t.entries) {
            out << "  " << l;
            for (std::size_t i = l.size(); i < 26; ++i) out << ' ';
            out << io::format_double(v) << "\n";
        }
    }
    out << "validation: " << report.errors.size() << " errors, " << report.warnings.size() << " warnings\n";
    for (const auto& e : report.errors) out << "  error " << e.location << ": " << e.message << "\n";
    for (const auto& w : report.warnings) out << "  warning " << w.location << ": " << w.message << "\n";
    return exit_ok;
}

/// Entry point shared by the binary and the tests. Maps domain errors to
/// exit code 2, oracle-suite failures to 1.
inline int run(const std::vector<std::string>& arguments, std::ostream& out, std::ostream& err) {
    CLI::App app{"mediation analysis of age-stratified case fatality data"};
    app.require_subcommand(1);

    EffectsArgs effects_args;
    auto* effects_cmd = app.add_subcommand("effects", "total, direct, and indirect effects for one cohort pair");
    effects_cmd->add_option("--data", effects_args.data, "bundled dataset name or cohort file path (repeatable)")->required();
    effects_cmd->add_option("--control", effects_args.control, "control cohort label")->required();
    effects_cmd->add_option("--treatment", effects_args.treatment, "treatment cohort label")->required();
    effects_cmd->add_option("--band", effects_args.band, "band label for the controlled direct effect");
    effects_cmd->add_option("--reference", effects_args.reference, "reference cohort for the expected CDE");
    effects_cmd->add_option("--undefined-band", effects_args.undefined_band, "zero-case band policy: error|zero");
    effects_cmd->add_option("--format", effects_args.format, "table|json|csv");

    TraceArgs trace_args;
    auto* trace_cmd = app.add_subcommand("trace", "TCE/NDE/NIE per snapshot of a series, control fixed");
    trace_cmd->add_option("--data", trace_args.data, "bundled series dataset name or series file path (repeatable)")->required();
    trace_cmd->add_option("--control", trace_args.control, "control cohort label")->required();
    trace_cmd->add_option("--undefined-band", trace_args.undefined_band, "zero-case band policy: error|zero");
    trace_cmd->add_option("--format", trace_args.format, "table|json|csv");

    MatrixArgs matrix_args;
    auto* matrix_cmd = app.add_subcommand("matrix", "all ordered-pair effects over a cohort set");
    matrix_cmd->add_option("--data", matrix_args.data, "bundled dataset name")->required();
    matrix_cmd->add_option("--kind", matrix_args.kind, "tce|nde|nie")->required();
    matrix_cmd->add_option("--format", matrix_args.format, "table|json|csv");

    CorrelateArgs correlate_args;
    auto* correlate_cmd = app.add_subcommand("correlate", "headline correlation tests over the cohort set");
    correlate_cmd->add_option("--data", correlate_args.data, "bundled dataset name")->required();
    correlate_cmd->add_option("--test", correlate_args.test,
                              "nde-vs-nie-rank|nie-rank-vs-median-age|pairwise-nde-vs-nie")->required();
    correlate_cmd->add_option("--p", correlate_args.p_method, "p-value method: t|permutation");
    correlate_cmd->add_option("--seed", correlate_args.seed, "permutation seed");
    correlate_cmd->add_option("--reps", correlate_args.reps, "permutation replicates")->check(CLI::PositiveNumber);
    correlate_cmd->add_option("--format", correlate_args.format, "table|json|csv");

    SimpsonArgs simpson_args;
    auto* simpson_cmd = app.add_subcommand("simpson", "per-band sign table and reversal verdict");
    simpson_cmd->add_option("--data", simpson_args.data, "bundled dataset name or cohort file path (repeatable)")->required();
    simpson_cmd->add_option("--control", simpson_args.control, "control cohort label")->required();
    simpson_cmd->add_option("--treatment", simpson_args.treatment, "treatment cohort label")->required();
    simpson_cmd->add_option("--format", simpson_args.format, "table|json|csv");

    OracleArgs oracle_args;
    auto* oracle_cmd = app.add_subcommand("validate-oracle", "counterfactual enumeration vs mediation formulas");
    oracle_cmd->add_option("--k", oracle_args.k, "mediator arity of random models");
    oracle_cmd->add_option("--instances", oracle_args.instances, "number of random models");
    oracle_cmd->add_option("--seed", oracle_args.seed, "base seed");
    oracle_cmd->add_option("--sample-n", oracle_args.sample_n, "run the sampling-recovery study with this n per arm");
    oracle_cmd->add_option("--scm", oracle_args.scm_path, "validate a single scm file instead");

    DatasetsArgs datasets_args;
    auto* datasets_cmd = app.add_subcommand("datasets", "bundled dataset management");
    auto* list_cmd = datasets_cmd->add_subcommand("list", "list bundled datasets");
    auto* show_cmd = datasets_cmd->add_subcommand("show", "show one dataset with its validation report");
    show_cmd->add_option("name", datasets_args.show_name, "dataset name")->required();
    show_cmd->add_option("--format", datasets_args.format, "table|json");
    datasets_cmd->require_subcommand(1);

    std::vector<std::string> reversed(arguments.rbegin(), arguments.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }

    try {
        if (*effects_cmd) return cmd_effects(effects_args, out);
        if (*trace_cmd) return cmd_trace(trace_args, out);
        if (*matrix_cmd) return cmd_matrix(matrix_args, out);
        if (*correlate_cmd) return cmd_correlate(correlate_args, out);
        if (*simpson_cmd) return cmd_simpson(simpson_args, out);
        if (*oracle_cmd) return cmd_validate_oracle(oracle_args, out);
        if (*datasets_cmd) {
            datasets_args.list = list_cmd->parsed();
            return cmd_datasets(datasets_args, out);
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }
    err << "error: no command\n";
    return exit_usage;
}

} // namespace cfrmed::cli
