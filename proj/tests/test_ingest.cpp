#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "cfrmed/bundled_data.hpp"
#include "cfrmed/io.hpp"
#include "cfrmed/registry.hpp"

using namespace cfrmed;

TEST_CASE("bundled italy series has the full span of snapshots") {
    DatasetRegistry reg = load_bundled("italy_series");
    const CohortSeries& series = reg.one_series();
    CHECK(series.label() == "Italy");
    REQUIRE(series.snapshots().size() == 14);
    CHECK(series.snapshots().front().report_date().iso() == "2020-03-09");
    CHECK(series.snapshots().back().report_date().iso() == "2020-05-26");
    CHECK(reg.cohort("China").total_cases() == 44672);
}

TEST_CASE("deaths exceeding cases is a parse error") {
    const std::string text =
        "#cohort,Broken,2020-01-01,test\n"
        "band,cases,deaths\n"
        "0-9,3,5\n"
        "10+,10,0\n";
    io::ParsedObject parsed = io::parse_cohort_text(text, "broken.csv");
    CHECK(!parsed.cohort.has_value());
    REQUIRE(parsed.report.errors.size() == 1);
    CHECK(parsed.report.errors[0].message == "band 0-9: deaths exceed cases (5 > 3)");
}

TEST_CASE("spain series carries the documented total-mismatch warning") {
    DatasetRegistry reg = load_bundled("spain_series");
    const CohortSeries& series = reg.one_series();
    REQUIRE(series.snapshots().size() == 11);
    bool found = false;
    for (const auto& w : reg.load_report().warnings)
        if (w.location == "Spain 2020-05-14" &&
            w.message == "declared total deaths 19115 != sum of per-band deaths 19155")
            found = true;
    CHECK(found);
    CHECK(reg.load_report().errors.empty());
}

TEST_CASE("countries_latest matches the source-report margins") {
    DatasetRegistry reg = load_bundled("countries_latest");
    REQUIRE(reg.cohorts().size() == 12);
    std::int64_t cases = 0, deaths = 0;
    for (const auto& [label, c] : reg.cohorts()) {
        cases += c.total_cases();
        deaths += c.total_deaths();
    }
    CHECK(cases == 756004);
    CHECK(deaths == 68508);

    CHECK(reg.cohort("Argentina").total_cases() == 14675);
    CHECK(reg.cohort("Argentina").total_deaths() == 507);
    CHECK(reg.cohort("Diamond Princess").total_cases() == 619);
    CHECK(reg.cohort("Diamond Princess").total_deaths() == 7);
    CHECK(reg.cohort("Spain").total_cases() == 258760);
    CHECK(reg.cohort("Switzerland").total_deaths() == 1648);
    CHECK(reg.load_report().errors.empty());
    CHECK(reg.load_report().warnings.empty());
}

TEST_CASE("lombardy and median-age bundles") {
    DatasetRegistry lombardy = load_bundled("lombardy_ifr");
    REQUIRE(lombardy.cohorts().size() == 2);
    const auto& pre = lombardy.cohort("Lombardy before 16 March");
    CHECK(pre.schema() == BandSchema::from_labels({"0-19", "20-49", "50-59", "60-69", "70-79", "80+"}));
    CHECK(pre.total_cases() == 1423);
    CHECK(lombardy.cohort("Lombardy after 16 March").total_cases() == 1358);

    DatasetRegistry ages = load_bundled("median_ages");
    const ScalarTable& table = ages.scalar_table("median_ages");
    REQUIRE(table.entries.size() == 12);
    CHECK(table.value_of("Italy") == 45.4);
    CHECK(table.value_of("China") == 38.4);
}

TEST_CASE("every bundled dataset validates with zero errors") {
    for (const auto& name : bundled_dataset_names()) {
        DatasetRegistry reg = load_bundled(name);
        ValidationReport report = validate_registry(reg);
        CHECK(report.errors.empty());
        CHECK(validate_registry(reg).errors.size() == report.errors.size());  // idempotent
        CHECK(validate_registry(reg).warnings.size() == report.warnings.size());
    }
}

TEST_CASE("validate_registry pinpoints a hand-corrupted count") {
    DatasetRegistry reg = load_bundled("countries_latest");
    const auto& sweden = reg.cohort("Sweden");
    std::vector<std::int64_t> deaths = sweden.deaths();
    deaths[3] = sweden.cases()[3] + 1;
    reg.insert_without_validation(StratifiedCohort(sweden.label(), sweden.report_date(), sweden.source(),
                                                   sweden.schema(), sweden.cases(), deaths));
    ValidationReport report = validate_registry(reg);
    REQUIRE(report.errors.size() == 1);
    CHECK(report.errors[0].location == "Sweden 2020-05-18");
    CHECK(report.errors[0].message.find("band 30-39") == 0);
}

TEST_CASE("registry including spain_series has warnings but no errors") {
    DatasetRegistry reg = load_bundled("spain_series");
    ValidationReport report = validate_registry(reg);
    CHECK(report.errors.empty());
    CHECK(!report.warnings.empty());
}

TEST_CASE("serialization reproduces every bundled file byte for byte") {
    for (const auto& f : bundled::files()) {
        const std::string origin(f.path);
        const std::string content(f.content);
        if (content.rfind("#scalars,", 0) == 0) {
            auto parsed = io::parse_scalar_text(content, origin);
            REQUIRE(parsed.table.has_value());
            CHECK(io::serialize(*parsed.table) == content);
            continue;
        }
        io::ParsedObject parsed = io::parse_cohort_text(content, origin);
        REQUIRE(parsed.report.ok());
        if (parsed.cohort) CHECK(io::serialize(*parsed.cohort) == content);
        if (parsed.series) CHECK(io::serialize(*parsed.series) == content);
    }
}

TEST_CASE("parser rejects the documented malformation classes") {
    auto first_error = [](const std::string& text) {
        io::ParsedObject parsed = io::parse_cohort_text(text, "t.csv");
        REQUIRE(!parsed.report.ok());
        return parsed.report.errors[0].message;
    };
    CHECK(first_error("#kohort,A,2020-01-01,s\nband,cases,deaths\n0+,1,0\n").find("malformed header") == 0);
    CHECK(first_error("#cohort,A,2020-01-01,s\nband,cases,deaths\nteens,1,0\n").find("unknown band label") == 0);
    CHECK(first_error("#cohort,A,2020-01-01,s\nband,cases,deaths\n0+,-1,0\n").find("negative count") == 0);
    CHECK(first_error("#cohort,A,01.01.2020,s\nband,cases,deaths\n0+,1,0\n").find("malformed date") == 0);
    const std::string duplicate_date =
        "#series,A\n"
        "#cohort,A,2020-01-01,s\nband,cases,deaths\n0+,1,0\n"
        "#cohort,A,2020-01-01,s\nband,cases,deaths\n0+,2,0\n";
    CHECK(first_error(duplicate_date).find("duplicate date") == 0);
}

TEST_CASE("parsing is deterministic") {
    const std::string content(bundled::k_spain_series);
    auto a = io::parse_cohort_text(content, "a");
    auto b = io::parse_cohort_text(content, "a");
    REQUIRE(a.series.has_value());
    REQUIRE(b.series.has_value());
    CHECK(io::serialize(*a.series) == io::serialize(*b.series));
    CHECK(a.report.warnings == b.report.warnings);
}

TEST_CASE("data directory override replaces bundled content per file") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "cfrmed_override_test";
    fs::create_directories(dir / "countries");
    {
        std::ofstream out(dir / "countries" / "sweden.csv", std::ios::binary);
        out << "#cohort,Sweden,2020-05-18,sweden\n"
               "band,cases,deaths\n"
               "0-9,1,0\n10-19,1,0\n20-29,1,0\n30-39,1,0\n40-49,1,0\n50-59,1,0\n60-69,1,0\n70-79,1,0\n80+,1,1\n";
    }
    setenv(data_dir_env_var(), dir.string().c_str(), 1);
    DatasetRegistry reg = load_bundled("countries_latest");
    unsetenv(data_dir_env_var());
    CHECK(reg.cohort("Sweden").total_cases() == 9);
    CHECK(reg.cohort("Argentina").total_cases() == 14675);  // untouched files stay embedded

    DatasetRegistry stock = load_bundled("countries_latest");
    CHECK(stock.cohort("Sweden").total_cases() == 34432);
    CHECK(stock.content_hash() != reg.content_hash());
    fs::remove_all(dir);
}

TEST_CASE("parse_cohort_file reads from disk") {
    namespace fs = std::filesystem;
    fs::path path = fs::temp_directory_path() / "cfrmed_single.csv";
    {
        std::ofstream out(path, std::ios::binary);
        out << "#cohort,Solo,2020-02-02,test\nband,cases,deaths\n0-9,4,1\n10+,6,2\ntotal,10,3\n";
    }
    io::ParsedObject parsed = io::parse_cohort_file(path.string());
    REQUIRE(parsed.cohort.has_value());
    CHECK(parsed.cohort->label() == "Solo");
    CHECK(parsed.cohort->declared_total_cases() == 10);
    CHECK(parsed.report.ok());
    fs::remove(path);
    CHECK_THROWS_AS(io::parse_cohort_file(path.string()), ParseError);
}

TEST_CASE("unknown dataset names fail cleanly") {
    CHECK_THROWS_AS(load_bundled("countries_newest"), UnknownDatasetError);
    CHECK_THROWS_AS(load_dataset("no/such/file.csv"), UnknownDatasetError);
}
