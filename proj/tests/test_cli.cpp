#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "support.hpp"

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = ellnum::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

nlohmann::json json_of(const Result& r) { return nlohmann::json::parse(r.out); }

const std::string k37 = "0,0,1,-1,0";
const std::string kB = "0,0,3,-1,2";

}  // namespace

TEST(Cli, NpExamples) {
    auto r = run({"--cache", "none", "np", "--curve", k37, "--prime", "1009"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(json_of(r)["np"], 1057);
    r = run({"--cache", "none", "--curve", k37, "np", "--prime", "113"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(json_of(r)["np"], 132);
    r = run({"--cache", "none", "--curve", k37, "np", "--prime", "37"});
    EXPECT_EQ(r.code, 2);
    EXPECT_EQ(json_of(r)["bad_reduction"], true);
    r = run({"--cache", "none", "--curve", k37, "np", "--prime", "10"});
    EXPECT_EQ(r.code, 1);
    EXPECT_FALSE(r.err.empty());
}

TEST(Cli, G1Json) {
    const auto r = run({"--cache", "none", "--curve", kB, "g1", "--n", "624"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = json_of(r);
    EXPECT_EQ(j["n"], 624);
    EXPECT_EQ(j["primes"], nlohmann::json({593, 619, 661}));
    EXPECT_EQ(j["multiplicity"], 3);
}

TEST(Cli, GkListsPublishedSets) {
    const auto r = run({"--cache", "none", "--curve", k37, "gk", "--k", "3", "--n", "3360"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = json_of(r);
    EXPECT_EQ(j["k"], 3);
    const auto& sols = j["solutions"];
    EXPECT_EQ(j["count"], sols.size());
    EXPECT_NE(std::find(sols.begin(), sols.end(), nlohmann::json({2, 13, 43})), sols.end());
    EXPECT_NE(std::find(sols.begin(), sols.end(), nlohmann::json({3, 5, 67})), sols.end());
}

TEST(Cli, CensusEmptyAndCsv) {
    auto r = run({"--cache", "none", "census", "--k", "3", "--x", "0"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(json_of(r)["entries_count"], 0);
    r = run({"--cache", "none", "--format", "csv", "census", "--k", "3", "--x", "0"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("\nn,count\n"), std::string::npos);
    r = run({"--cache", "none", "--format", "csv", "census", "--k", "2", "--x", "300"});
    ASSERT_EQ(r.code, 0) << r.err;
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    std::getline(in, line);
    EXPECT_EQ(line, "n,count");
    unsigned long long prev = 0;
    while (std::getline(in, line)) {
        const auto n = std::stoull(line.substr(0, line.find(',')));
        EXPECT_GT(n, prev);
        prev = n;
    }
    EXPECT_GT(prev, 0u);
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(run({}).code, 64);
    EXPECT_EQ(run({"frobnicate"}).code, 64);
    EXPECT_EQ(run({"--format", "xml", "np", "--prime", "5"}).code, 64);
    EXPECT_EQ(run({"np"}).code, 64);
    EXPECT_EQ(run({"--curve", "1,2,3", "np", "--prime", "5"}).code, 64);
    EXPECT_EQ(run({"--workers", "0", "np", "--prime", "5"}).code, 64);
    EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, OperationErrors) {
    EXPECT_EQ(run({"--cache", "none", "pied", "--x", "50", "--d", "4"}).code, 1);
    EXPECT_EQ(run({"--cache", "none", "moments", "--x", "10"}).code, 1);
    EXPECT_EQ(run({"--cache", "none", "mertens", "--x", "1000", "--a", "0.5", "--b", "0.5"}).code, 1);
}

TEST(Cli, StampAndDeterminism) {
    const std::vector<std::string> args{"--cache", "none", "--seed", "7", "--curve", k37, "census", "--k", "2", "--x",
                                        "2000"};
    const auto a = run(args);
    const auto b = run(args);
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    const auto stamp = json_of(a)["stamp"];
    EXPECT_EQ(stamp["tool"], "ellnum");
    EXPECT_EQ(stamp["curve"], k37);
    EXPECT_EQ(stamp["seed"], 7);
    EXPECT_TRUE(stamp.contains("version"));
    EXPECT_TRUE(stamp.contains("limit"));
    for (const std::string fmt : {"csv", "table-text"}) {
        const auto t = run({"--cache", "none", "--format", fmt, "pied", "--x", "50", "--d", "2"});
        ASSERT_EQ(t.code, 0) << t.err;
        EXPECT_EQ(t.out.rfind("# ellnum ", 0), 0u) << fmt;
        EXPECT_NE(t.out.find("curve=0,0,1,-1,0"), std::string::npos);
        EXPECT_NE(t.out.find("seed=1"), std::string::npos);
    }
}

TEST(Cli, TableCommandWritesCache) {
    const auto dir = fixture::scratch_dir("cli_table");
    const auto file = dir / "out.ellnum";
    const auto r = run({"--cache", dir.string(), "table", "--limit", "500", "--out", file.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(std::filesystem::exists(file));
    EXPECT_TRUE(std::filesystem::exists(dir / "0_0_1_-1_0_500.ellnum"));
    EXPECT_EQ(ellnum::load_table(file), ellnum::build_table(fixture::e37(), 500));
    std::filesystem::remove_all(dir);
}

TEST(Cli, VerifyPaperFreshCheckoutPasses) {
    const auto dir = fixture::scratch_dir("cli_verify_fresh");
    const auto r = run({"--cache", dir.string(), "verify-paper"});
    const auto j = json_of(r);
    for (const auto& c : j["checks"]) {
        EXPECT_EQ(c["status"], "PASS") << c["check"] << ": expected " << c["expected"] << ", computed " << c["computed"];
    }
    EXPECT_EQ(r.code, 0);
    std::filesystem::remove_all(dir);
}

TEST(Cli, VerifyPaperReportsCorruptedCache) {
    const auto dir = fixture::scratch_dir("cli_verify_corrupt");
    run({"--cache", dir.string(), "verify-paper"});
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(dir)) files.push_back(e.path());
    ASSERT_FALSE(files.empty());
    std::sort(files.begin(), files.end());
    const auto victim = files.front();
    std::string text;
    {
        std::ifstream in(victim);
        std::ostringstream s;
        s << in.rdbuf();
        text = s.str();
    }
    // Replace the N value on the 11th data line with one far outside the Hasse interval.
    std::size_t at = 0;
    for (int i = 0; i < 11; ++i) at = text.find('\n', at) + 1;
    const auto comma = text.find(',', at);
    const auto eol = text.find('\n', at);
    text.replace(comma + 1, eol - comma - 1, "999999999");
    {
        std::ofstream out(victim, std::ios::trunc);
        out << text;
    }
    const auto r = run({"--cache", dir.string(), "verify-paper"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE((r.out + r.err).find("Hasse violation"), std::string::npos) << r.out << r.err;
    EXPECT_NE((r.out + r.err).find(victim.filename().string()), std::string::npos);
    std::filesystem::remove_all(dir);
}
