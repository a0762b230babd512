#include <gtest/gtest.h>

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

using namespace natconv;
using namespace natconv::cli;

namespace {

struct CliRun {
    int code = 0;
    std::string out;
    std::string err;
};

CliRun invoke(std::vector<std::string> args)
{
    args.insert(args.begin(), "natconv");
    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out, err;
    const int code = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override
    {
        dir_ = std::filesystem::temp_directory_path() /
               (std::string("natconv_cli_") + ::testing::UnitTest::GetInstance()->current_test_info()->name());
        std::filesystem::remove_all(dir_);
    }
    void TearDown() override { std::filesystem::remove_all(dir_); }
    std::string dir() const { return dir_.string(); }
    std::filesystem::path dir_;
};

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_F(CliTest, SolveWritesArtifacts)
{
    const CliRun r = invoke({"solve", "--n", "16", "--ra", "10", "--output", dir()});
    ASSERT_EQ(r.code, 0) << r.err;
    for (const char* f : {"psi.vtk", "theta.vtk", "newton.log", "diagnostics.txt"}) {
        EXPECT_TRUE(std::filesystem::exists(dir_ / f)) << f;
    }
    const std::string log = slurp(dir_ / "newton.log");
    EXPECT_EQ(log.rfind("iter=0 wnorm=", 0), 0u);
}

TEST_F(CliTest, SubcommandOptionsFallThrough)
{
    const CliRun r = invoke({"solve", "--n", "8", "--format", "csv", "--output", dir()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(std::filesystem::exists(dir_ / "psi.csv"));
}

TEST_F(CliTest, ConvergenceWritesRates)
{
    const CliRun r = invoke({"convergence", "--levels", "4,8,16", "--ra", "10", "--output", dir()});
    ASSERT_EQ(r.code, 0) << r.err;
    const std::string csv = slurp(dir_ / "rates.csv");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
    EXPECT_TRUE(std::filesystem::exists(dir_ / "rates.txt"));
}

TEST_F(CliTest, SweepWritesPairPerRayleigh)
{
    const CliRun r = invoke({"sweep-ra", "--n", "8", "--ra", "0,10,50", "--format", "csv", "--output", dir()});
    ASSERT_EQ(r.code, 0) << r.err;
    for (const char* ra : {"0", "10", "50"}) {
        EXPECT_TRUE(std::filesystem::exists(dir_ / (std::string("psi_ra") + ra + ".csv")));
        EXPECT_TRUE(std::filesystem::exists(dir_ / (std::string("theta_ra") + ra + ".csv")));
        EXPECT_TRUE(std::filesystem::exists(dir_ / (std::string("newton_ra") + ra + ".log")));
    }
    const std::string sweep = slurp(dir_ / "sweep.csv");
    EXPECT_EQ(std::count(sweep.begin(), sweep.end(), '\n'), 4);
}

TEST_F(CliTest, SweepContinuesPastFailures)
{
    const CliRun r = invoke({"sweep-ra", "--n", "8", "--ra", "0,10", "--max-iterations", "1", "--output", dir()});
    EXPECT_EQ(r.code, kDivergence);
    // Ra = 0 with a zero initial guess is not linear here (theta is nonzero), so
    // both fail under a one-iteration cap; both logs must still be present.
    EXPECT_TRUE(std::filesystem::exists(dir_ / "newton_ra0.log"));
    EXPECT_TRUE(std::filesystem::exists(dir_ / "newton_ra10.log"));
    EXPECT_TRUE(std::filesystem::exists(dir_ / "sweep.csv"));
}

TEST_F(CliTest, DiagnosticsWithStabilitySweep)
{
    const CliRun r = invoke({"diagnostics", "--n", "8", "--ra", "0.5", "--source-scale", "1e-3", "--stability-scales",
                          "1e-4,2e-4", "--output", dir()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(std::filesystem::exists(dir_ / "diagnostics.csv"));
    EXPECT_TRUE(std::filesystem::exists(dir_ / "stability.csv"));
}

TEST_F(CliTest, ConfigErrorExitCode)
{
    for (const auto& args : std::vector<std::vector<std::string>>{{"solve", "--n", "0"},
                                                                  {"solve", "--epsilon", "-1"},
                                                                  {"solve", "--ra", "1,2"},
                                                                  {"frobnicate"},
                                                                  {"solve", "--format", "png"},
                                                                  {"convergence", "--levels", "8,16"},
                                                                  {}}) {
        const CliRun r = invoke(args);
        EXPECT_EQ(r.code, kConfigError);
        const auto rec = nlohmann::json::parse(r.err);
        EXPECT_EQ(rec["exit_code"], 2);
        EXPECT_EQ(rec["error"], "config");
    }
}

TEST_F(CliTest, DivergenceExitCode)
{
    const CliRun r = invoke({"solve", "--n", "8", "--max-iterations", "1", "--output", dir()});
    EXPECT_EQ(r.code, kDivergence);
    const auto rec = nlohmann::json::parse(r.err);
    EXPECT_EQ(rec["error"], "divergence");
    EXPECT_TRUE(std::filesystem::exists(dir_ / "newton.log"));
    EXPECT_FALSE(std::filesystem::exists(dir_ / "psi.vtk"));
}

TEST_F(CliTest, IoErrorExitCode)
{
    std::filesystem::create_directories(dir_);
    std::ofstream(dir_ / "file") << "x";
    const CliRun r = invoke({"solve", "--n", "4", "--output", (dir_ / "file" / "sub").string()});
    EXPECT_EQ(r.code, kIoError);
    EXPECT_EQ(nlohmann::json::parse(r.err)["error"], "io");
}

TEST_F(CliTest, ConfigFileWithFlagOverride)
{
    std::filesystem::create_directories(dir_);
    const auto cfg = dir_ / "run.ini";
    std::ofstream(cfg) << "n=6\nra=3\nformat=csv\n";
    std::vector<std::string> args{"natconv", "--config", cfg.string(), "solve", "--n", "5"};
    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out;
    const auto c = parse_args(static_cast<int>(argv.size()), argv.data(), out);
    ASSERT_TRUE(c.has_value());
    EXPECT_EQ(c->n, 5);
    EXPECT_EQ(c->rayleigh, std::vector<double>{3.0});
    EXPECT_EQ(c->format, FieldFormat::csv);
    EXPECT_EQ(c->subcommand, "solve");
}

TEST_F(CliTest, HelpReturnsNoConfig)
{
    const CliRun r = invoke({"--help"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("sweep-ra"), std::string::npos);
}

TEST_F(CliTest, SerialSolveIsDeterministic)
{
    const std::string a = dir() + "/a", b = dir() + "/b";
    ASSERT_EQ(invoke({"solve", "--n", "12", "--serial", "--format", "csv", "--output", a}).code, 0);
    ASSERT_EQ(invoke({"solve", "--n", "12", "--serial", "--format", "csv", "--output", b}).code, 0);
    for (const char* f : {"psi.csv", "theta.csv", "newton.log", "diagnostics.txt"}) {
        EXPECT_EQ(slurp(std::filesystem::path(a) / f), slurp(std::filesystem::path(b) / f)) << f;
    }
}
