#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "heckelab/errors.hpp"
#include "report_io.hpp"
#include "suites.hpp"

using namespace heckelab;
using namespace heckelab::cli;
namespace fs = std::filesystem;

namespace {

SuiteConfig cfg_for(std::string suite) {
    SuiteConfig c;
    c.suite = std::move(suite);
    return c;
}

VerificationReport sample_report() {
    VerificationReport r;
    r.suite = "demo";
    r.params.emplace_back("p", "2,3");
    r.check("count", "7", "7", Source::Reference, "a count", true);
    r.check("quoted, \"field\"", "1", "2", Source::Derived, "line\nbreak", false);
    r.tables.push_back(Table{"cells/p=2", {"label", "size"}, {{"{0,0,0}", "1024"}, {"a,b", "3"}}});
    r.tables.push_back(Table{"cells/p=2", {"x"}, {{"1"}}});
    r.notes.push_back("note");
    r.wall_seconds = 1.5;
    r.cache_hits = 4;
    return r;
}

}  // namespace

TEST(CliSuites, RegistryListsEverySuite) {
    const auto& ids = suite_ids();
    for (const char* id : {"a23", "a24", "t438", "lemma4312", "fibers41", "fibers42", "coeff618", "coeff626",
                           "discrepancy629", "g4failure", "rcount", "satake-identities", "appendix1", "ap1-residue",
                           "kolyvagin", "chow-prop31", "all"})
        EXPECT_NE(std::find(ids.begin(), ids.end(), id), ids.end()) << id;
    EXPECT_EQ(ids.size(), 17u);
}

TEST(CliSuites, ValidationRejectsBadGrids) {
    EXPECT_THROW(validate(cfg_for("nope")), UnknownSuite);

    auto c = cfg_for("a24");
    c.ps = {5};
    EXPECT_THROW(validate(c), DomainError);
    c.ps = {4};
    EXPECT_THROW(validate(c), DomainError);
    c.ps = {2};
    c.i = 2;
    EXPECT_THROW(validate(c), DomainError);
    c.i = 1;
    EXPECT_NO_THROW(validate(c));

    auto g = cfg_for("g4failure");
    g.g = 3;
    EXPECT_THROW(validate(g), DomainError);

    auto m = cfg_for("satake-identities");
    for (std::int64_t bad : {2, 15, 49, 1}) {
        m.moduli = {bad};
        EXPECT_THROW(validate(m), DomainError) << bad;
    }
    m.moduli = {3, 5, 9, 25, 27};
    EXPECT_NO_THROW(validate(m));

    auto t = cfg_for("rcount");
    t.threads = 0;
    EXPECT_THROW(validate(t), DomainError);
}

TEST(CliSuites, AllIsLenientAboutPerSuiteGrids) {
    auto c = cfg_for("all");
    c.ps = {2, 3, 5, 7};
    c.moduli = {9, 49};
    EXPECT_NO_THROW(validate(c));
    c.ps = {4};
    EXPECT_THROW(validate(c), DomainError);
}

TEST(CliSuites, ReportsDoNotDependOnThreadCount) {
    for (const char* id : {"a23", "rcount", "lemma4312"}) {
        auto one = cfg_for(id), four = cfg_for(id);
        four.threads = 4;
        auto a = to_json(run_suite(one), "t"), b = to_json(run_suite(four), "t");
        a.erase("wall_seconds");
        b.erase("wall_seconds");
        EXPECT_EQ(a, b) << id;
    }
}

TEST(CliSuites, FastSuitesPass) {
    for (const char* id : {"a23", "rcount", "satake-identities", "appendix1", "ap1-residue", "kolyvagin"}) {
        auto c = cfg_for(id);
        c.threads = 4;
        const auto rep = run_suite(c);
        EXPECT_TRUE(rep.pass()) << id;
        EXPECT_FALSE(rep.checks.empty()) << id;
    }
}

TEST(CliReport, JsonRoundTrip) {
    const auto r = sample_report();
    const auto j = to_json(r, "1.2.3");
    EXPECT_EQ(j.at("version"), "1.2.3");
    EXPECT_EQ(j.at("failures"), 1);
    EXPECT_FALSE(j.at("pass").get<bool>());
    const auto back = from_json(nlohmann::json::parse(j.dump()));
    EXPECT_EQ(to_json(back, "1.2.3"), j);
    EXPECT_THROW(from_json(nlohmann::json::object()), nlohmann::json::exception);
}

TEST(CliReport, CsvEscaping) {
    EXPECT_EQ(csv_escape("plain"), "plain");
    EXPECT_EQ(csv_escape("a,b"), "\"a,b\"");
    EXPECT_EQ(csv_escape("say \"hi\""), "\"say \"\"hi\"\"\"");
    EXPECT_EQ(csv_escape("x\ny"), "\"x\ny\"");
}

TEST(CliReport, WritesJsonAndCsvFiles) {
    const fs::path dir = fs::temp_directory_path() / "heckelab_cli_report";
    fs::remove_all(dir);
    const fs::path out = dir / "nested" / "rep.json";
    write_report(sample_report(), out, "v");
    ASSERT_TRUE(fs::exists(out));
    const fs::path csv1 = dir / "nested" / "rep.cells_p_2.csv";
    const fs::path csv2 = dir / "nested" / "rep.cells_p_2_1.csv";
    ASSERT_TRUE(fs::exists(csv1));
    ASSERT_TRUE(fs::exists(csv2));
    std::ifstream in(csv1);
    std::string header, row1, row2;
    std::getline(in, header);
    std::getline(in, row1);
    std::getline(in, row2);
    EXPECT_EQ(header, "label,size");
    EXPECT_EQ(row1, "\"{0,0,0}\",1024");
    EXPECT_EQ(row2, "\"a,b\",3");
    fs::remove_all(dir);
}
