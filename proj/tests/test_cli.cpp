#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "cfrmed/cli.hpp"

using namespace cfrmed;

namespace {

struct RunResult {
    int code;
    std::string out;
    std::string err;
};

RunResult run_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

} // namespace

TEST_CASE("effects command prints the worked comparison at one decimal") {
    RunResult r = run_cli({"effects", "--data", "china_vs_italy_march9", "--control", "China", "--treatment", "Italy"});
    CHECK(r.code == 0);
    CHECK(contains(r.out, "TCE                       +2.2%"));
    CHECK(contains(r.out, "NDE                       -0.8%"));
    CHECK(contains(r.out, "NIE                       +3.3%"));
    CHECK(contains(r.out, "moderation residual       -0.3%"));
    CHECK(contains(r.out, "# dataset china_vs_italy_march9 hash "));

    RunResult band = run_cli({"effects", "--data", "china_vs_italy_march9", "--control", "China", "--treatment",
                              "Italy", "--band", "50-59"});
    CHECK(band.code == 0);
    CHECK(contains(band.out, "CDE(50-59)                -1.1%"));

    RunResult self = run_cli({"effects", "--data", "china_vs_italy_march9", "--control", "China", "--treatment", "China"});
    CHECK(self.code == 0);
    CHECK(contains(self.out, "TCE                       +0.0%"));
    CHECK(contains(self.out, "NDE                       +0.0%"));
    CHECK(contains(self.out, "NIE                       +0.0%"));
}

TEST_CASE("effects json output reparses and carries provenance") {
    RunResult r = run_cli({"effects", "--data", "china_vs_italy_march9", "--control", "China", "--treatment", "Italy",
                           "--format", "json"});
    CHECK(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["command"] == "effects");
    CHECK(j["dataset"]["name"] == "china_vs_italy_march9");
    CHECK(j["dataset"]["hash"].get<std::string>().size() == 16);
    CHECK(j["flags"]["control"] == "China");
    CHECK(j["results"]["tce"]["display"] == "+2.2%");
    CHECK(j["results"]["nie"]["value"].get<double>() == doctest::Approx(0.0327).epsilon(1e-3));
    CHECK(j["results"]["subtractivity_residuals"].size() == 2);
}

TEST_CASE("unknown labels exit 2 with suggestions") {
    RunResult r = run_cli({"effects", "--data", "china_vs_italy_march9", "--control", "Chin", "--treatment", "Italy"});
    CHECK(r.code == 2);
    CHECK(contains(r.err, "unknown label 'Chin'"));
    CHECK(contains(r.err, "China"));

    RunResult mismatch = run_cli({"effects", "--data", "lombardy_ifr", "--control", "Lombardy before 16 March",
                                  "--treatment", "Lombardy after 16 March", "--band", "0-9"});
    CHECK(mismatch.code == 2);

    RunResult missing = run_cli({"effects", "--data", "china_vs_italy_march9"});
    CHECK(missing.code == 2);

    RunResult unknown_data = run_cli({"effects", "--data", "nope", "--control", "a", "--treatment", "b"});
    CHECK(unknown_data.code == 2);
}

TEST_CASE("undefined band handling is selectable from the command line") {
    RunResult err_mode = run_cli({"effects", "--data", "china_vs_italy_march9", "--control", "China (0/0 variant)",
                                  "--treatment", "Italy"});
    CHECK(err_mode.code == 2);
    CHECK(contains(err_mode.err, "undefined rate"));

    RunResult zero_mode = run_cli({"effects", "--data", "china_vs_italy_march9", "--control", "China (0/0 variant)",
                                   "--treatment", "Italy", "--undefined-band", "zero"});
    CHECK(zero_mode.code == 0);
    CHECK(contains(zero_mode.out, "[zero-coerced bands]"));
}

TEST_CASE("trace csv has one row per snapshot and the documented sign flips") {
    RunResult italy = run_cli({"trace", "--data", "italy_series", "--control", "China", "--format", "csv"});
    CHECK(italy.code == 0);
    std::istringstream lines(italy.out);
    std::string line;
    std::getline(lines, line);  // provenance
    std::getline(lines, line);
    CHECK(line == "date,tce,nde,nie");
    int rows = 0;
    std::map<std::string, double> nde_by_date;
    while (std::getline(lines, line)) {
        ++rows;
        auto first = line.find(',');
        auto second = line.find(',', first + 1);
        auto third = line.find(',', second + 1);
        nde_by_date[line.substr(0, first)] = std::stod(line.substr(second + 1, third - second - 1));
    }
    CHECK(rows == 14);
    CHECK(nde_by_date["2020-03-12"] < 0.0);
    CHECK(nde_by_date["2020-03-19"] > 0.0);

    RunResult spain = run_cli({"trace", "--data", "spain_series", "--control", "China", "--format", "csv"});
    CHECK(spain.code == 0);
    std::istringstream spain_lines(spain.out);
    std::getline(spain_lines, line);
    std::getline(spain_lines, line);
    int spain_rows = 0;
    std::map<std::string, double> spain_nde;
    while (std::getline(spain_lines, line)) {
        ++spain_rows;
        auto first = line.find(',');
        auto second = line.find(',', first + 1);
        auto third = line.find(',', second + 1);
        spain_nde[line.substr(0, first)] = std::stod(line.substr(second + 1, third - second - 1));
    }
    CHECK(spain_rows == 11);
    CHECK(spain_nde["2020-03-26"] < 0.0);
    CHECK(spain_nde["2020-04-02"] > 0.0);
}

TEST_CASE("matrix orderings group the strongest and weakest treatments") {
    RunResult nde_m = run_cli({"matrix", "--data", "countries_latest", "--kind", "nde", "--format", "json"});
    CHECK(nde_m.code == 0);
    auto j = nlohmann::json::parse(nde_m.out);
    CHECK(j["labels"][0] == "Diamond Princess");
    auto values = j["values"];
    for (std::size_t i = 0; i < values.size(); ++i) CHECK(values[i][i].get<double>() == 0.0);

    RunResult nie_m = run_cli({"matrix", "--data", "countries_latest", "--kind", "nie", "--format", "json"});
    auto ji = nlohmann::json::parse(nie_m.out);
    CHECK(ji["labels"][0] == "South Africa");

    RunResult tce_m = run_cli({"matrix", "--data", "countries_latest", "--kind", "tce", "--format", "json"});
    auto jt = nlohmann::json::parse(tce_m.out);
    auto vt = jt["values"];
    for (std::size_t r = 0; r < vt.size(); ++r)
        for (std::size_t c = 0; c < vt.size(); ++c)
            CHECK(vt[r][c].get<double>() == -vt[c][r].get<double>());

    RunResult bad = run_cli({"matrix", "--data", "countries_latest", "--kind", "cde"});
    CHECK(bad.code == 2);
}

TEST_CASE("correlate reports the three headline tests") {
    RunResult age = run_cli({"correlate", "--data", "countries_latest", "--test", "nie-rank-vs-median-age",
                             "--format", "json"});
    CHECK(age.code == 0);
    auto j = nlohmann::json::parse(age.out);
    CHECK(j["method"] == "spearman");
    CHECK(j["n"] == 12);
    CHECK(j["coefficient"].get<double>() > 0.85);

    RunResult pairwise = run_cli({"correlate", "--data", "countries_latest", "--test", "pairwise-nde-vs-nie",
                                  "--format", "json"});
    auto jp = nlohmann::json::parse(pairwise.out);
    CHECK(jp["method"] == "pearson");
    CHECK(jp["n"] == 132);
    CHECK(jp["total_pairs"] == 132);
    CHECK(std::abs(jp["discordant_pairs"].get<int>() - 64) <= 3);

    RunResult rank = run_cli({"correlate", "--data", "countries_latest", "--test", "nde-vs-nie-rank"});
    CHECK(rank.code == 0);
    CHECK(contains(rank.out, "method: spearman"));

    RunResult perm = run_cli({"correlate", "--data", "countries_latest", "--test", "nde-vs-nie-rank", "--p",
                              "permutation", "--seed", "7", "--reps", "499"});
    CHECK(perm.code == 0);
    CHECK(contains(perm.out, "permutation(seed=7,reps=499)"));
}

TEST_CASE("simpson verdicts from the command line") {
    RunResult r = run_cli({"simpson", "--data", "china_vs_italy_march9", "--control", "China", "--treatment", "Italy"});
    CHECK(r.code == 0);
    CHECK(contains(r.out, "reversal: yes"));
    CHECK(contains(r.out, "total     +"));

    RunResult self = run_cli({"simpson", "--data", "china_vs_italy_march9", "--control", "China", "--treatment", "China"});
    CHECK(contains(self.out, "reversal: no"));

    // hand check from the infection table: every defined band moves the same
    // way as the total, so no reversal
    RunResult lombardy = run_cli({"simpson", "--data", "lombardy_ifr", "--control", "Lombardy before 16 March",
                                  "--treatment", "Lombardy after 16 March"});
    CHECK(lombardy.code == 0);
    CHECK(contains(lombardy.out, "reversal: no"));
    CHECK(contains(lombardy.out, "total     -"));
}

TEST_CASE("validate-oracle runs the property suite") {
    RunResult r = run_cli({"validate-oracle", "--k", "3", "--instances", "50", "--seed", "11"});
    CHECK(r.code == 0);
    CHECK(contains(r.out, "result: PASS"));
    CHECK(contains(r.out, "moderation preset: TCE=1 NDE=0 NIE=0 [ok]"));

    RunResult bad = run_cli({"validate-oracle", "--k", "0"});
    CHECK(bad.code == 2);

    RunResult sampled = run_cli({"validate-oracle", "--k", "3", "--instances", "10", "--seed", "11", "--sample-n", "20000"});
    CHECK(sampled.code == 0);
    CHECK(contains(sampled.out, "sampling recovery: PASS"));
}

TEST_CASE("validate-oracle accepts an scm file") {
    namespace fs = std::filesystem;
    fs::path path = fs::temp_directory_path() / "cfrmed_moderation.scm";
    {
        std::ofstream out(path, std::ios::binary);
        out << scm::serialize(scm::moderation_example());
    }
    RunResult r = run_cli({"validate-oracle", "--scm", path.string()});
    CHECK(r.code == 0);
    CHECK(contains(r.out, "TCE 1"));
    CHECK(contains(r.out, "result: PASS"));
    fs::remove(path);
}

TEST_CASE("datasets list and show") {
    RunResult list = run_cli({"datasets", "list"});
    CHECK(list.code == 0);
    int lines = 0;
    for (char c : list.out)
        if (c == '\n') ++lines;
    CHECK(lines == 6);
    CHECK(contains(list.out, "countries_latest: 12 cohorts"));
    CHECK(contains(list.out, "italy_series"));

    RunResult show = run_cli({"datasets", "show", "countries_latest"});
    CHECK(show.code == 0);
    CHECK(contains(show.out, "cohorts: 12"));
    CHECK(contains(show.out, "totals: cases 756004 deaths 68508"));
    CHECK(contains(show.out, "validation: 0 errors, 0 warnings"));

    RunResult spain = run_cli({"datasets", "show", "spain_series"});
    CHECK(spain.code == 0);
    CHECK(contains(spain.out, "warning Spain 2020-05-14: declared total deaths 19115 != sum of per-band deaths 19155"));

    RunResult unknown = run_cli({"datasets", "show", "nope"});
    CHECK(unknown.code == 2);
}

TEST_CASE("effects with a reference demographic") {
    RunResult r = run_cli({"effects", "--data", "countries_latest", "--control", "China", "--treatment", "Italy",
                           "--reference", "Spain"});
    CHECK(r.code == 0);
    CHECK(contains(r.out, "ExpectedCDE(ref=Spain)"));
}

TEST_CASE("repeated --data flags merge user files into one registry") {
    namespace fs = std::filesystem;
    fs::path a = fs::temp_directory_path() / "cfrmed_merge_a.csv";
    fs::path b = fs::temp_directory_path() / "cfrmed_merge_b.csv";
    {
        std::ofstream out(a, std::ios::binary);
        out << "#cohort,Alpha,2020-04-01,test\nband,cases,deaths\n0-9,100,1\n10+,100,9\n";
    }
    {
        std::ofstream out(b, std::ios::binary);
        out << "#cohort,Beta,2020-04-01,test\nband,cases,deaths\n0-9,100,2\n10+,100,20\n";
    }
    RunResult r = run_cli({"effects", "--data", a.string(), "--data", b.string(), "--control", "Alpha",
                           "--treatment", "Beta", "--format", "json"});
    CHECK(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["results"]["tce"]["value"].get<double>() == doctest::Approx(0.06).epsilon(1e-12));

    RunResult collide = run_cli({"effects", "--data", a.string(), "--data", a.string(), "--control", "Alpha",
                                 "--treatment", "Alpha"});
    CHECK(collide.code == 2);
    fs::remove(a);
    fs::remove(b);
}

TEST_CASE("identical invocations emit byte-identical output") {
    std::vector<std::vector<std::string>> invocations = {
        {"effects", "--data", "china_vs_italy_march9", "--control", "China", "--treatment", "Italy", "--format", "json"},
        {"matrix", "--data", "countries_latest", "--kind", "nde", "--format", "csv"},
        {"correlate", "--data", "countries_latest", "--test", "pairwise-nde-vs-nie", "--p", "permutation", "--seed",
         "3", "--reps", "200", "--format", "json"},
        {"trace", "--data", "spain_series", "--control", "China", "--format", "csv"},
        {"datasets", "show", "spain_series"},
    };
    for (const auto& argv : invocations) {
        RunResult a = run_cli(argv);
        RunResult b = run_cli(argv);
        CHECK(a.code == b.code);
        CHECK(a.out == b.out);
    }
}
