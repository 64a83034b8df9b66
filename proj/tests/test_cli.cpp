#include "rankdist/acceptance.hpp"
#include "rankdist/cli.hpp"
#include "rankdist/output.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace rankdist;

namespace {

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

CliRun run(std::vector<std::string> args)
{
    std::ostringstream out, err;
    const int code = cli::run_command(args, out, err);
    return {code, out.str(), err.str()};
}

io::OutputRecord parsed(const CliRun& r, io::Format f = io::Format::csv) { return io::parse(r.out, f); }

std::size_t column(const io::OutputRecord& rec, const std::string& name)
{
    for (std::size_t i = 0; i < rec.columns.size(); ++i) {
        if (rec.columns[i].name == name) {
            return i;
        }
    }
    throw std::out_of_range("no column " + name);
}

const io::Row* find_row(const io::OutputRecord& rec, std::initializer_list<std::pair<const char*, const char*>> match)
{
    for (const auto& row : rec.rows) {
        bool ok = true;
        for (const auto& [name, value] : match) {
            ok = ok && row[column(rec, name)] == value;
        }
        if (ok) {
            return &row;
        }
    }
    return nullptr;
}

} // namespace

TEST(Cli, ExactTable)
{
    const CliRun r = run({"exact", "--n", "5", "--kmax", "4"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rec = parsed(r);
    const io::Row* row = find_row(rec, {{"n", "5"}, {"k", "0"}});
    ASSERT_NE(row, nullptr);
    EXPECT_EQ((*row)[column(rec, "a")], "315");
    EXPECT_EQ((*row)[column(rec, "E")], "3");
    EXPECT_EQ(rec.rows.size(), 5u);
}

TEST(Cli, ExactRange)
{
    const CliRun r = run({"exact", "--nmax", "6"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rec = parsed(r);
    EXPECT_EQ(rec.rows.size(), 36u); // n = 1..6, k = 0..5
    const io::Row* row = find_row(rec, {{"n", "3"}, {"k", "1"}});
    ASSERT_NE(row, nullptr);
    EXPECT_EQ((*row)[column(rec, "pi")], "1/3");
    EXPECT_EQ((*row)[column(rec, "b")], "2");
}

TEST(Cli, LimitsTable)
{
    const CliRun r = run({"limits", "--kmax", "3", "--step", "1e-6"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rec = parsed(r);
    const io::Row* row = find_row(rec, {{"k", "3"}});
    ASSERT_NE(row, nullptr);
    EXPECT_NEAR(io::parse_real((*row)[column(rec, "c")]), 0.0032684102, 1e-8);
    EXPECT_EQ((*row)[column(rec, "bound_holds")], "1");
}

TEST(Cli, OracleCensus)
{
    const CliRun r = run({"oracle", "--n", "3"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rec = parsed(r);
    EXPECT_EQ((*find_row(rec, {{"quantity", "a"}, {"k1", "0"}}))[3], "5");
    EXPECT_EQ((*find_row(rec, {{"quantity", "a"}, {"k1", "1"}}))[3], "3");
    EXPECT_EQ((*find_row(rec, {{"quantity", "a"}, {"k1", "2"}}))[3], "1");
    EXPECT_EQ((*find_row(rec, {{"quantity", "pi"}, {"k1", "1"}}))[3], "1/3");
}

TEST(Cli, SimulateIsByteIdentical)
{
    const std::vector<std::string> args{"simulate", "--n", "2000", "--reps", "4", "--seed", "9", "--pairs", "500"};
    const CliRun a = run(args), b = run(args);
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    const auto rec = parsed(a);
    EXPECT_EQ(rec.seed, "9");
    EXPECT_NE(find_row(rec, {{"quantity", "pair_frequency"}, {"k1", "0"}, {"k2", "0"}}), nullptr);
    EXPECT_NE(find_row(rec, {{"quantity", "largest_rank_window_fraction"}}), nullptr);
}

TEST(Cli, CsvAndJsonCarryTheSameNumbers)
{
    std::vector<std::string> args{"simulate", "--n", "1000", "--reps", "3", "--seed", "5"};
    const CliRun csv = run(args);
    args.insert(args.end(), {"--format", "json"});
    const CliRun json = run(args);
    ASSERT_EQ(csv.code, 0);
    ASSERT_EQ(json.code, 0);
    EXPECT_EQ(parsed(csv), parsed(json, io::Format::json));

    const CliRun ecsv = run({"exact", "--nmax", "7"});
    const CliRun ejson = run({"exact", "--nmax", "7", "--format", "json"});
    EXPECT_EQ(parsed(ecsv), parsed(ejson, io::Format::json));
}

TEST(Cli, WritesOutFile)
{
    const auto path = std::filesystem::temp_directory_path() / "rankdist_cli_test.json";
    const CliRun r = run({"oracle", "--n", "4", "--format", "json", "--out", path.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(r.out.empty());
    std::ifstream in(path);
    const auto rec = io::read_json(in);
    EXPECT_EQ(rec.command, "oracle");
    std::filesystem::remove(path);
}

TEST(Cli, UsageErrorsExitOne)
{
    const std::vector<std::vector<std::string>> bad = {
        {},
        {"frobnicate"},
        {"exact"},
        {"exact", "--n", "abc"},
        {"exact", "--n", "-3"},
        {"exact", "--n", "5", "--nmax", "6"},
        {"exact", "--n", "5", "--bogus"},
        {"oracle", "--n", "10"},
        {"oracle", "--n", "0"},
        {"oracle"},
        {"limits", "--step", "0"},
        {"limits", "--step", "1e-2"},
        {"limits", "--method", "simpson"},
        {"simulate", "--epsilon", "2"},
        {"simulate", "--reps", "0"},
        {"simulate", "--format", "xml"},
        {"verify", "sometimes"},
    };
    for (const auto& args : bad) {
        const CliRun r = run(args);
        std::string joined;
        for (const auto& a : args) {
            joined += a + " ";
        }
        EXPECT_EQ(r.code, 1) << joined;
        EXPECT_FALSE(r.err.empty()) << joined;
        EXPECT_EQ(r.err.find('\n'), r.err.size() - 1) << "one-line diagnostic expected: " << r.err;
    }
}

TEST(Cli, OutFileFailureIsReported)
{
    const CliRun r = run({"oracle", "--n", "3", "--out", "/nonexistent-dir/x.csv"});
    EXPECT_EQ(r.code, 1);
}

TEST(Cli, HelpExitsZero)
{
    const CliRun r = run({"--help"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("simulate"), std::string::npos);
    EXPECT_NE(r.out.find("THREADS"), std::string::npos);
    const CliRun sub = run({"simulate", "--help"});
    EXPECT_EQ(sub.code, 0);
    EXPECT_NE(sub.out.find("--pairs"), std::string::npos);
}

TEST(Cli, VerifyQuickPasses)
{
    const CliRun r = run({"verify", "quick"});
    EXPECT_EQ(r.code, 0) << r.out;
    for (const char* id : {"A1 ", "A2 ", "A3 ", "A4 ", "A5 ", "A6 "}) {
        EXPECT_NE(r.out.find(std::string(id) + " PASS"), std::string::npos) << id;
    }
    EXPECT_EQ(r.out.find("A7"), std::string::npos);
}

TEST(Cli, VerifyFullSmoke)
{
    const auto path = std::filesystem::temp_directory_path() / "rankdist_verify.csv";
    const CliRun r = run({"verify", "full", "--smoke", "--out", path.string()});
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("A10 PASS"), std::string::npos);
    EXPECT_NE(r.out.find("smoke"), std::string::npos);
    std::ifstream in(path);
    const auto rec = io::read_csv(in);
    EXPECT_EQ(rec.rows.size(), 10u);
    std::filesystem::remove(path);
}

TEST(Acceptance, TamperedLeafCountFailsA1)
{
    exact::RankTable table = acceptance::a1_table();
    EXPECT_TRUE(acceptance::check_a1(table).passed);
    std::vector<ExactRational> c(table.a[0].coeffs().begin(), table.a[0].coeffs().end());
    c[5] = make_rational(314, 120); // a_0(5) = 314 instead of 315
    table.a[0] = series::SeriesEGF(c);
    const auto r = acceptance::check_a1(table);
    EXPECT_FALSE(r.passed);
    EXPECT_NE(r.measured.find("n = 5"), std::string::npos);
    EXPECT_FALSE(acceptance::all_passed({r}));
}

TEST(Acceptance, TamperedOracleFailsA2)
{
    const auto tables = acceptance::series_tables(4, 4);
    std::vector<oracle::OracleCensus> cs{oracle::census_all(4)};
    EXPECT_TRUE(acceptance::check_a2(cs, tables).passed);
    cs[0].pi_exact[1] += make_rational(1, 1000);
    EXPECT_FALSE(acceptance::check_a2(cs, tables).passed);
}

TEST(Acceptance, TamperedConstantsFailA3)
{
    auto lc = limits::compute_limits(acceptance::a3_kmax, acceptance::a3_step);
    EXPECT_TRUE(acceptance::check_a3(lc).passed);
    lc.c[2] += 2e-8;
    EXPECT_FALSE(acceptance::check_a3(lc).passed);
}

TEST(Acceptance, StochasticChecksRejectBias)
{
    sim::ExperimentConfig cfg;
    cfg.n = 20000;
    cfg.replicates = 20;
    cfg.master_seed = 3;
    cfg.pair_samples_per_tree = 2000;
    const auto rep = sim::run_experiment(cfg);
    auto lc = limits::compute_limits(acceptance::a3_kmax, acceptance::a3_step);
    EXPECT_TRUE(acceptance::check_a8(rep, lc).passed);
    EXPECT_TRUE(acceptance::check_a9(rep, lc).passed);
    lc.c[1] += 0.01;
    EXPECT_FALSE(acceptance::check_a8(rep, lc).passed);
    EXPECT_FALSE(acceptance::check_a9(rep, lc).passed);
}
