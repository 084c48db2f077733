#include "bdcover/problem.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace bdcover;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct RunResult {
    int code = -1;
    std::string out;
};

std::string env_or(const char* name, const std::string& fallback) {
    const char* v = std::getenv(name);
    return v ? std::string(v) : fallback;
}

std::string cli() { return env_or("BDCOVER_CLI", BDCOVER_CLI_PATH); }
fs::path problems() { return env_or("BDCOVER_EXAMPLES", BDCOVER_SOURCE_DIR "/examples/problems"); }
fs::path golden() { return env_or("BDCOVER_GOLDEN", BDCOVER_SOURCE_DIR "/tests/golden"); }

// Runs the CLI with stdout captured; stderr is folded in when `with_err` is set.
RunResult run(const std::string& args, bool with_err = false) {
    const std::string cmd = "'" + cli() + "' " + args + (with_err ? " 2>&1" : " 2>/dev/null");
    RunResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    std::array<char, 4096> buf{};
    std::size_t got = 0;
    while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string problem(const std::string& name) { return "'" + (problems() / (name + ".json")).string() + "'"; }

json run_json(const std::string& cmd, const std::string& name, const std::string& extra = "") {
    auto r = run(cmd + " --input " + problem(name) + " --format json " + extra);
    EXPECT_EQ(r.code, 0) << cmd << " " << name;
    return json::parse(r.out);
}

fs::path write_temp(const std::string& name, const std::string& text) {
    auto p = fs::temp_directory_path() / ("bdcover_test_" + name + ".json");
    std::ofstream(p) << text;
    return p;
}

std::string read(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST(ProblemFormat, ParseErrorsCarryPosition) {
    try {
        parse_problem_text("{\n  \"n\": 2,\n  \"datum\": {\"type\": \"C\" \"rank\": 2}\n}");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Parse);
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
        EXPECT_EQ(e.exit_code(), 2);
    }
}

TEST(ProblemFormat, RejectsUnknownKeysAndBadValues) {
    EXPECT_THROW(parse_problem_text(R"({"schema_version": 1, "datum": {"type": "A", "rank": 2}, "n": 2, "bogus": 1})"), Error);
    EXPECT_THROW(parse_problem_text(R"({"schema_version": 1, "datum": {"type": "A", "rank": 2}, "n": "two"})"), Error);
    EXPECT_THROW(parse_problem_text(R"({"schema_version": 1, "datum": {"type": "A", "rank": 2}, "n": 2, "character": "weird"})"), Error);
}

TEST(ProblemFormat, RoundTripsEveryExample) {
    for (const auto& entry : fs::directory_iterator(problems())) {
        auto spec = parse_problem_text(read(entry.path()));
        auto j1 = to_json(spec);
        auto j2 = to_json(parse_problem(j1));
        EXPECT_EQ(j1, j2) << entry.path();
        EXPECT_EQ(j1.at("schema_version"), kSchemaVersion);
    }
}

TEST(Cli, OutputMatchesGoldenFiles) {
    const bool update = std::getenv("BDCOVER_UPDATE_GOLDEN") != nullptr;
    const std::vector<std::pair<std::string, std::string>> cases{
        {"sp4_siegel", "lattices"},      {"sp4_siegel", "dual"},          {"sp4_siegel", "distinguished"},
        {"sp4_siegel", "constant-term"}, {"sp4_nonsiegel", "constant-term"}, {"sl2_n2", "gk"},
        {"sl2_n2", "constant-term"},     {"e7_n2", "lattices"},           {"e7_n2", "distinguished"},
        {"g2_n3", "gk"},                 {"g2_n3", "dual"},
    };
    for (const auto& [name, cmd] : cases) {
        auto r = run(cmd + " --input " + problem(name) + " --format json");
        ASSERT_EQ(r.code, 0) << name << " " << cmd;
        const auto path = golden() / (name + "__" + cmd + ".json");
        if (update) std::ofstream(path) << r.out;
        EXPECT_EQ(r.out, read(path)) << path;
    }
}

TEST(Cli, OutputIsDeterministic) {
    for (const char* fmt : {"json", "table"}) {
        auto a = run("distinguished --input " + problem("e7_n2") + " --format " + fmt);
        auto b = run("distinguished --input " + problem("e7_n2") + " --format " + fmt);
        EXPECT_EQ(a.code, 0);
        EXPECT_EQ(a.out, b.out);
    }
}

TEST(Cli, SymplecticDegreesAndLattices) {
    auto j = run_json("lattices", "sp4_siegel");
    EXPECT_EQ(j.at("schema_version"), 1);
    EXPECT_EQ(j.at("n_alpha").at("alpha1"), 2);
    EXPECT_EQ(j.at("n_alpha").at("alpha2"), 1);
    EXPECT_EQ(j.at("Y_Qn_equals_Y"), true);
    EXPECT_EQ(j.at("index_Y_Qn_over_Y_Qn_sc"), 2);
}

TEST(Cli, E7NamedGenerator) {
    auto j = run_json("distinguished", "e7_n2");
    EXPECT_EQ(j.at("distinguished"), true);
    bool found = false;
    for (const auto& row : j.at("table")) {
        if (row.at("generator") != "e_Omega = alpha4^vee+alpha6^vee+alpha7^vee") continue;
        found = true;
        EXPECT_EQ(row.at("matches"), true);
        EXPECT_EQ(row.at("gamma_power"), 3);
        EXPECT_EQ(row.at("classes_checked"), 24);
    }
    EXPECT_TRUE(found);
}

TEST(Cli, Sp4NonSiegelArguments) {
    auto j = run_json("constant-term", "sp4_nonsiegel");
    std::vector<std::string> args;
    for (const auto& p : j.at("numerator")) args.push_back(p.at("argument"));
    EXPECT_EQ(args, (std::vector<std::string>{"1*s", "2*s"}));
    auto s = run_json("constant-term", "sp4_siegel");
    ASSERT_EQ(s.at("numerator").size(), 1u);
    EXPECT_EQ(s.at("numerator")[0].at("dim"), 3);
}

TEST(Cli, ParabolicFlagOverridesProblem) {
    auto j = run_json("constant-term", "sp4_siegel", "--parabolic 2");
    EXPECT_EQ(j.at("numerator").size(), 2u);
}

TEST(Cli, WordFlagAndCheck) {
    auto j = run_json("gk", "g2_n3", "--word 1,2,1 --check");
    EXPECT_EQ(j.at("factors").size(), 3u);
    EXPECT_EQ(j.at("cocycle_relation_holds"), true);
    EXPECT_EQ(j.at("check").at("ok"), true);
}

TEST(Cli, NonReducedWordIsReportedReduced) {
    auto j = run_json("gk", "sl2_n2", "--word 1,1");
    EXPECT_EQ(j.at("word_reduced"), false);
    EXPECT_TRUE(j.at("reduced_word").empty());
    EXPECT_TRUE(j.at("factors").empty());
}

TEST(Cli, SeedFlagChangesValues) {
    auto a = run_json("distinguished", "sl2_n2", "--seed-psi +i");
    auto b = run_json("distinguished", "sl2_n2", "--seed-psi -i");
    EXPECT_EQ(a.at("seed_psi_exponent"), "3/12");
    EXPECT_EQ(b.at("seed_psi_exponent"), "9/12");
    EXPECT_EQ(b.at("distinguished"), true);
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run("check --input " + problem("sp4_siegel")).code, 0);
    EXPECT_EQ(run("lattices --input /nonexistent/file.json").code, 2);
    EXPECT_EQ(run("lattices --input " + problem("sp4_siegel") + " --format yaml").code, 2);
    EXPECT_EQ(run("frobnicate").code, 2);
    auto bad = write_temp("malformed", "{\"datum\": ");
    EXPECT_EQ(run("lattices --input '" + bad.string() + "'").code, 2);
    auto invalid = write_temp("invalid", R"({"schema_version": 1, "datum": {"type": "A", "rank": 1, "isogeny": "ad"}, "quadratic": {"short_coroot_values": [1]}, "n": 2})");
    EXPECT_EQ(run("lattices --input '" + invalid.string() + "'").code, 3);
    EXPECT_EQ(run("gk --input " + problem("sl2_n2") + " --word 2").code, 3);
    auto r = run("distinguished --input " + problem("pgl2_obstruction") + " --format json", true);
    EXPECT_EQ(r.code, 4);
    auto err = json::parse(r.out);
    EXPECT_EQ(err.at("error").at("kind"), "ObstructionPresent");
    EXPECT_NE(err.at("error").at("witness").get<std::string>().find("a=g^3"), std::string::npos);
}
