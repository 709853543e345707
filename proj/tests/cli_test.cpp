#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>

#include "support/golden.hpp"

using exform::testing::run_cli;
using exform::testing::strip_timing;

namespace {

namespace fs = std::filesystem;

const fs::path kTestsDir = EXFORM_TESTS_DIR;

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        fs::current_path(kTestsDir);
        unsetenv("EXFORM_EXPONENT_BOUND");
    }
    void TearDown() override { unsetenv("EXFORM_EXPONENT_BOUND"); }

    /// Writes `text` into a scratch .form file and returns its path.
    static std::string scratch(const std::string& name, const std::string& text) {
        const fs::path dir = fs::temp_directory_path() / "exform_cli_test";
        fs::create_directories(dir);
        const fs::path p = dir / name;
        std::ofstream(p, std::ios::binary) << text;
        return p.string();
    }
};

nlohmann::ordered_json report_of(const std::string& out) { return nlohmann::ordered_json::parse(out); }

}  // namespace

TEST_F(CliTest, GoldenReports) {
    const bool update = std::getenv("EXFORM_UPDATE_GOLDEN") != nullptr;
    const auto cases = exform::testing::load_cases(kTestsDir / "golden" / "cases.txt");
    ASSERT_FALSE(cases.empty());
    for (const auto& c : cases) {
        const auto r = run_cli(c.args);
        ASSERT_EQ(r.code, 0) << c.name << ": " << r.err;
        const auto got = strip_timing(r.out);
        const auto path = exform::testing::golden_path(kTestsDir, c.name);
        if (update) {
            std::ofstream(path, std::ios::binary) << got;
            continue;
        }
        ASSERT_TRUE(fs::exists(path)) << "missing golden file " << path;
        EXPECT_EQ(got, exform::testing::read_text(path)) << c.name;
    }
}

TEST_F(CliTest, EverySubcommandHasAGoldenCase) {
    std::set<std::string> covered;
    for (const auto& c : exform::testing::load_cases(kTestsDir / "golden" / "cases.txt")) covered.insert(c.args.front());
    for (const auto& cmd : exform::cli::detail::subcommands()) EXPECT_TRUE(covered.count(cmd)) << cmd;
}

TEST_F(CliTest, ReportsAreDeterministic) {
    const std::vector<std::string> args{"analyze", "fixtures/closed_exact.form", "fixtures/rotation.form",
                                        "fixtures/heat.form", "fixtures/flux.form", "fixtures/contact.form"};
    const auto first = strip_timing(run_cli(args).out);
    for (int i = 0; i < 5; ++i) EXPECT_EQ(strip_timing(run_cli(args).out), first);
    // batch results follow argument order
    const auto rep = report_of(run_cli(args).out);
    std::vector<std::string> files;
    for (const auto& r : rep["results"]) files.push_back(r["file"]);
    EXPECT_EQ(files, (std::vector<std::string>{"fixtures/closed_exact.form", "fixtures/rotation.form",
                                                "fixtures/heat.form", "fixtures/flux.form", "fixtures/contact.form"}));
}

TEST_F(CliTest, ReportSchema) {
    const auto r = run_cli({"analyze", "fixtures/unclosed.form"});
    ASSERT_EQ(r.code, 0);
    const auto rep = report_of(r.out);
    std::vector<std::string> keys;
    for (const auto& [k, v] : rep.items()) keys.push_back(k);
    EXPECT_EQ(keys, (std::vector<std::string>{"tool_version", "command", "input_digest", "results", "timing_ms"}));
    EXPECT_EQ(rep["tool_version"], exform::kVersion);
    EXPECT_EQ(rep["input_digest"].get<std::string>().rfind("sha256:", 0), 0u);
    const auto& w = rep["results"][0];
    EXPECT_EQ(w["closed"], false);
    EXPECT_TRUE(w["closed"].is_boolean());
    EXPECT_EQ(w["commutator_entries"][0]["value"], "1");
    EXPECT_EQ(w["classification"], "unclosed");
    EXPECT_TRUE(r.err.empty());
}

TEST_F(CliTest, ThermoReportsInverseTemperature) {
    const auto r = run_cli({"thermo", "--cv", "3/2", "--R", "1", "--format", "json"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("\"1/T\""), std::string::npos);
}

TEST_F(CliTest, TableTextHasDimensionRow) {
    const auto r = run_cli({"table", "--format", "text"});
    ASSERT_EQ(r.code, 0);
    bool found = false;
    std::istringstream in(r.out);
    for (std::string line; std::getline(in, line);) {
        if (line.rfind("N ", 0) != 0) continue;
        std::istringstream words(line.substr(1));
        std::vector<std::string> w{std::istream_iterator<std::string>(words), {}};
        EXPECT_EQ(w, (std::vector<std::string>{"1", "2", "3", "4"}));
        found = true;
    }
    EXPECT_TRUE(found) << r.out;
}

TEST_F(CliTest, ExitCodeMatrix) {
    const auto bad_syntax = scratch("bad_syntax.form", "vars(x, y)\nform w : 1 = x dy;\n");
    const auto bad_char = scratch("bad_char.form", "vars(x, y);\nform w : 1 = x $ dy;\n");
    const auto bad_degree = scratch("bad_degree.form", "vars(x, y);\nform w : 2 = x dy;\n");
    const auto bad_var = scratch("bad_var.form", "vars(x, y);\nform w : 1 = q dy;\n");
    const auto duplicate = scratch("duplicate.form", "vars(x);\nform w : 1 = dx;\nform w : 1 = dx;\n");
    const auto two_form = scratch("two_form.form", "vars(x, y, z);\nform F : 2 = x dx^dy;\nmetric e = +1, +1;\n");
    const auto good = "fixtures/unclosed.form";

    struct Row {
        std::vector<std::string> args;
        int code;
    };
    const std::vector<Row> matrix{
        {{}, 1},
        {{"frobnicate"}, 1},
        {{"analyze"}, 1},
        {{"analyze", "no/such/file.form"}, 1},
        {{"analyze", good, "--format", "yaml"}, 1},
        {{"analyze", good, "--exponent-bound", "0"}, 1},
        {{"star", good}, 1},
        {{"pullback", good}, 1},
        {{"poisson", "fixtures/poisson.form", "--form", "f", "--form", "g"}, 1},
        {{"poisson", "fixtures/poisson.form", "--form", "f", "--form", "g", "--pairs", "q"}, 1},
        {{"wedge", good}, 1},
        {{"thermo", "--cv", "abc"}, 1},
        {{"analyze", bad_syntax}, 2},
        {{"analyze", bad_char}, 2},
        {{"d", duplicate}, 2},
        {{"analyze", good, bad_syntax}, 2},
        {{"analyze", bad_degree}, 3},
        {{"analyze", bad_var}, 3},
        {{"commutator", two_form}, 3},
        {{"maxwell", good}, 3},
        {{"star", two_form, "--metric", "e"}, 3},
        {{"star", good, "--metric", "nope"}, 3},
        {{"analyze", good, "--form", "nope"}, 3},
        {{"thermo", "--cv", "0"}, 3},
        {{"thermo", "--cv", "1", "--R", "-1"}, 3},
        {{"jacobian", "fixtures/parabola.form", "--map", "phi"}, 3},
        {{"hamilton", "fixtures/poisson.form"}, 3},
        {{"analyze", good}, 0},
        {{"analyze", "fixtures/repeated_differential.form"}, 0},
        {{"table", "--n", "1"}, 0},
        {{"--version"}, 0},
    };
    for (const auto& row : matrix) {
        const auto r = run_cli(row.args);
        std::string cmdline;
        for (const auto& a : row.args) cmdline += a + " ";
        EXPECT_EQ(r.code, row.code) << cmdline << "\n" << r.err;
        if (row.code != 0) {
            EXPECT_TRUE(r.out.empty()) << cmdline;
            EXPECT_FALSE(r.err.empty()) << cmdline;
        }
    }
}

TEST_F(CliTest, ParseErrorsNameFileAndPosition) {
    const auto bad = scratch("located.form", "vars(x, y);\nform w : 1 = x dy dx;\n");
    const auto r = run_cli({"analyze", bad});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find(bad + ": parse error: 2:19:"), std::string::npos) << r.err;
}

TEST_F(CliTest, WarningsGoToStandardError) {
    const auto r = run_cli({"d", "fixtures/repeated_differential.form"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.err.find("fixtures/repeated_differential.form:2:14: warning"), std::string::npos) << r.err;
    EXPECT_EQ(report_of(r.out)["results"][0]["input"], "form b : 2 = 0;");
}

TEST_F(CliTest, ExponentBoundFlagWinsOverEnvironment) {
    auto bound_of = [](const std::vector<std::string>& args) {
        const auto r = run_cli(args);
        EXPECT_EQ(r.code, 0) << r.err;
        return report_of(r.out)["results"][0]["exponent_bound"].get<int>();
    };
    const std::vector<std::string> base{"factor", "fixtures/heat.form"};
    EXPECT_EQ(bound_of(base), 3);
    setenv("EXFORM_EXPONENT_BOUND", "1", 1);
    EXPECT_EQ(bound_of(base), 1);
    auto with_flag = base;
    with_flag.insert(with_flag.end(), {"--exponent-bound", "2"});
    EXPECT_EQ(bound_of(with_flag), 2);
    setenv("EXFORM_EXPONENT_BOUND", "many", 1);
    EXPECT_EQ(run_cli(base).code, 1);
    EXPECT_EQ(bound_of(with_flag), 2);
}

TEST_F(CliTest, ExecutableUsesTheSameEntryPoint) {
    auto run_binary = [](const std::string& args, std::string& out) {
        const std::string cmd = std::string("'") + EXFORM_CLI_PATH + "' " + args + " 2>/dev/null";
        FILE* pipe = popen(cmd.c_str(), "r");
        if (!pipe) return -1;
        char buf[4096];
        out.clear();
        for (std::size_t n; (n = fread(buf, 1, sizeof buf, pipe)) > 0;) out.append(buf, n);
        const int status = pclose(pipe);
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    };
    std::string out;
    EXPECT_EQ(run_binary("analyze fixtures/unclosed.form", out), 0);
    EXPECT_EQ(strip_timing(out), strip_timing(run_cli({"analyze", "fixtures/unclosed.form"}).out));
    EXPECT_EQ(run_binary("analyze", out), 1);
    EXPECT_EQ(run_binary("maxwell fixtures/unclosed.form", out), 3);
}
