#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"

using nlohmann::json;
namespace cli = sidon::cli;

namespace {

struct CliResult {
    int code = -1;
    std::string out;
    std::string err;

    [[nodiscard]] json report() const { return json::parse(out); }
};

CliResult run(std::vector<std::string> args) {
    std::ostringstream o, e;
    CliResult r;
    r.code = cli::run(std::move(args), o, e);
    r.out = o.str();
    r.err = e.str();
    return r;
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
    const auto p = std::filesystem::temp_directory_path() / ("sidon_cli_test_" + name);
    std::ofstream(p) << content;
    return p;
}

class EnvGuard {
public:
    explicit EnvGuard(const char* value) {
        if (value) setenv("SIDON_BUDGET_OVERRIDE", value, 1);
        else unsetenv("SIDON_BUDGET_OVERRIDE");
    }
    ~EnvGuard() { unsetenv("SIDON_BUDGET_OVERRIDE"); }
};

}  // namespace

TEST(Cli, FieldPrintsPolynomials) {
    const CliResult r = run({"field", "--q", "3", "--n", "4", "--seed", "2"});
    ASSERT_EQ(r.code, cli::kPass) << r.err;
    const json j = r.report();
    EXPECT_EQ(j.at("tower").at("p"), 3);
    EXPECT_EQ(j.at("tower").at("n"), 4);
    EXPECT_NE(r.err.find("[sidon] field finished in"), std::string::npos);
}

TEST(Cli, ConstructReportsHypotheses) {
    const CliResult r = run({"construct", "--preset", "lemma_4_1", "--q", "3", "--k", "2", "--n", "6"});
    ASSERT_EQ(r.code, cli::kPass) << r.err;
    const json j = r.report();
    EXPECT_EQ(j.at("spaces").at(0).at("dim"), 2);
    for (const auto& h : j.at("hypotheses")) EXPECT_TRUE(h.at("passed").get<bool>());
}

TEST(Cli, HypothesisViolationExitsTwo) {
    const CliResult r = run({"construct", "--preset", "thm_4_7", "--q", "2", "--k", "2", "--l", "3", "--n", "36"});
    EXPECT_EQ(r.code, cli::kHypothesis);
    const json j = r.report();
    EXPECT_EQ(j.at("error"), "HypothesisViolation");
    EXPECT_NE(j.at("message").get<std::string>().find("n/kl > 6"), std::string::npos);
}

TEST(Cli, CollapseExitsThree) {
    const CliResult r = run({"construct", "--preset", "thm_4_20", "--q", "2", "--k", "1", "--m", "5", "--r", "25", "--n",
                       "75", "--reading", "verbatim", "--force"});
    EXPECT_EQ(r.code, cli::kCollapse) << r.out;
}

TEST(Cli, UnknownPresetRejectedByParser) {
    const CliResult r = run({"construct", "--preset", "nope", "--q", "2"});
    EXPECT_EQ(r.code, cli::kInternal);
}

TEST(Cli, VerifyBothLevelsOnSidonPreset) {
    const CliResult r = run({"verify", "--preset", "lemma_4_1", "--q", "3", "--k", "2", "--n", "6", "--level", "both"});
    ASSERT_EQ(r.code, cli::kPass) << r.err;
    const json j = r.report();
    EXPECT_EQ(j.at("verdict"), "sidon");
    EXPECT_EQ(j.at("consistent"), true);
    const json& eq = j.at("spaces").at(0).at("equivalence");
    EXPECT_EQ(eq.at("equivalence_holds"), true);
    EXPECT_EQ(eq.at("orbit_matches"), true);
}

TEST(Cli, VerifySubfieldIsNegative) {
    const CliResult r = run({"verify", "--q", "2", "--n", "6", "--subfield", "2", "--level", "orbit"});
    EXPECT_EQ(r.code, cli::kNegative) << r.err;
    EXPECT_EQ(r.report().at("verdict"), "not_sidon");
}

TEST(Cli, ConstructThenVerifyFromFile) {
    const CliResult c = run({"construct", "--preset", "thm_4_5", "--q", "2", "--k", "2", "--n", "10"});
    ASSERT_EQ(c.code, cli::kPass);
    const auto path = temp_file("report.json", c.out);
    const CliResult v = run({"verify", "--input", path.string()});
    EXPECT_EQ(v.code, cli::kPass) << v.err;
    EXPECT_EQ(v.report().at("verdict"), "sidon");
}

TEST(Cli, SearchCounts) {
    for (const auto& [n, k, count] : std::vector<std::tuple<const char*, const char*, int>>{
             {"6", "2", 651}, {"4", "2", 35}, {"6", "3", 1395}}) {
        const CliResult r = run({"search", "--q", "2", "--n", n, "--k", k});
        ASSERT_EQ(r.code, cli::kPass) << r.err;
        const json j = r.report();
        EXPECT_EQ(j.at("count"), count);
        EXPECT_EQ(j.at("rows").size(), static_cast<std::size_t>(count));
        EXPECT_EQ(j.at("exceptions"), 0);
    }
}

TEST(Cli, SearchCsvHasOneRowPerSubspace) {
    const CliResult r = run({"search", "--q", "2", "--n", "4", "--k", "2", "--format", "csv"});
    ASSERT_EQ(r.code, cli::kPass);
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "index,basis,sidon,orbit_size,stabilizer_degree,max_intersection_dim,distance,equivalence_holds");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    EXPECT_EQ(rows, 35);
    EXPECT_NE(r.err.find("35 subspaces"), std::string::npos);
}

TEST(Cli, WorkerCountDoesNotChangeOutput) {
    const std::vector<std::vector<std::string>> cases = {
        {"verify", "--q", "2", "--n", "12", "--subfield", "4"},
        {"search", "--q", "2", "--n", "6", "--k", "2"},
        {"union", "--preset", "combined_4_21", "--q", "3", "--k", "2", "--n", "6"},
    };
    for (auto args : cases) {
        auto one = args, four = args;
        one.insert(one.end(), {"--workers", "1"});
        four.insert(four.end(), {"--workers", "4"});
        const CliResult a = run(one), b = run(four);
        EXPECT_EQ(a.code, b.code);
        EXPECT_EQ(a.out, b.out) << args[0];
    }
}

TEST(Cli, UnionClaimHolds) {
    const CliResult r = run({"union", "--preset", "combined_4_21", "--q", "3", "--k", "2", "--n", "6"});
    ASSERT_EQ(r.code, cli::kPass) << r.err;
    const json j = r.report();
    EXPECT_EQ(j.at("claim").at("holds"), true);
    EXPECT_EQ(j.at("claim").at("size"), 728);
}

TEST(Cli, BudgetPrecedence) {
    const std::vector<std::string> base = {"search", "--q", "2", "--n", "6", "--k", "2"};
    const auto cfg = temp_file("budget.cfg", "# budgets\nbudget-orbit = 10\n");
    auto cap_of = [](const CliResult& r) {
        EXPECT_EQ(r.code, cli::kBudget);
        return r.report().at("cap").get<std::uint64_t>();
    };
    {
        EnvGuard env(nullptr);
        auto a = base;
        a.insert(a.end(), {"--config", cfg.string()});
        EXPECT_EQ(cap_of(run(a)), 10u);
    }
    {
        EnvGuard env("orbit=20");
        auto a = base;
        a.insert(a.end(), {"--config", cfg.string()});
        EXPECT_EQ(cap_of(run(a)), 20u);
        a.insert(a.end(), {"--budget-orbit", "30"});
        EXPECT_EQ(cap_of(run(a)), 30u);
    }
    {
        EnvGuard env("25");
        EXPECT_EQ(cap_of(run(base)), 25u);
    }
}

TEST(Cli, ConfigSuppliesCommand) {
    const auto cfg = temp_file("command.cfg", "command=field\nq=5\nn=3\n");
    EnvGuard env(nullptr);
    const CliResult r = run({"--config", cfg.string()});
    ASSERT_EQ(r.code, cli::kPass) << r.err;
    EXPECT_EQ(r.report().at("tower").at("p"), 5);
}

TEST(Cli, BadConfigLine) {
    const auto cfg = temp_file("bad.cfg", "this is not a pair\n");
    const CliResult r = run({"field", "--config", cfg.string()});
    EXPECT_EQ(r.code, cli::kInternal);
}

TEST(Cli, PrintSchema) {
    const CliResult r = run({"construct", "--print-schema"});
    ASSERT_EQ(r.code, cli::kPass);
    EXPECT_TRUE(r.report().contains("$schema"));
}
