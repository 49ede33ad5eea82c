// Copyright 2026 The ldplab Authors
// SPDX-License-Identifier: Apache-2.0
#include <cstdlib>
#include <filesystem>
#include <sstream>

#include <gtest/gtest.h>
#include <sys/wait.h>

#include "ldplab/cli/commands.hpp"
#include "ldplab/cli/output.hpp"

namespace ldplab::cli {
namespace {

namespace fs = std::filesystem;

class TempDir
{
  public:
    TempDir()
    {
        auto const* info = ::testing::UnitTest::GetInstance()->current_test_info();
        path_ = fs::temp_directory_path() /
                (std::string("ldplab_") + info->test_suite_name() + "_" + info->name());
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    fs::path const& path() const { return path_; }

  private:
    fs::path path_;
};

std::string const kSmallConfig = R"(cost:
  name: huber
  threshold: 1
  dim: 2
oracle:
  mode: additive
  noise: two-point
  vector: [0.48, 0.64]
method:
  name: vanilla
  x1: [0.48, 0.64]
  step:
    kind: sgd-sqrt
    a: 0.5
ensemble:
  N: 400
  T: 12
  seed: 3
  epsilon_grid: [0.32]
  t_grid: [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12]
)";

int run(std::function<int()> const& body)
{
    std::ostringstream err;
    return guarded(body, err);
}

TEST(Config, UnknownKeyIsLineAnchored)
{
    auto const text = kSmallConfig + "bogus: 1\n";
    try
    {
        parse_config(text, "exp.yaml");
        FAIL() << "expected ConfigError";
    }
    catch (ConfigError const& e)
    {
        EXPECT_EQ(e.line(), 21);
        EXPECT_NE(std::string(e.what()).find("exp.yaml:21:"), std::string::npos) << e.what();
    }
}

TEST(Config, StepAboveInverseSmoothness)
{
    auto text = kSmallConfig;
    text.replace(text.find("a: 0.5"), 6, "a: 1.01");
    try
    {
        parse_config(text, "exp.yaml");
        FAIL() << "expected ConfigError";
    }
    catch (ConfigError const& e)
    {
        EXPECT_EQ(e.line(), 14);
        EXPECT_NE(e.detail().find("1/L"), std::string::npos) << e.what();
    }
}

TEST(Config, MissingBlock)
{
    EXPECT_THROW(parse_config("cost:\n  name: huber\n"), ConfigError);
    EXPECT_THROW(parse_config("cost: [\n"), ConfigError);
}

TEST(Config, PresetsValidateAndRoundTrip)
{
    for (auto const& name : preset_names())
    {
        auto const c = preset(name);
        EXPECT_NO_THROW(validate_config(c)) << name;
        auto const back = parse_config(to_yaml(c), name);
        EXPECT_EQ(config_digest(back), config_digest(c)) << name;
        EXPECT_EQ(config_digest(c).size(), 16u);
    }
    EXPECT_THROW(preset("nope"), ConfigError);
}

TEST(Config, DigestIgnoresOutputDirectory)
{
    auto a = parse_config(kSmallConfig);
    auto b = a;
    b.output.directory = "elsewhere";
    EXPECT_EQ(config_digest(a), config_digest(b));
    b.ensemble.seed = 4;
    EXPECT_NE(config_digest(a), config_digest(b));
}

TEST(Output, FormatNumberRoundTrips)
{
    for (double v : {0.1, 1.0 / 3.0, 1e-300, 12345.678, -2.5})
        EXPECT_EQ(std::stod(format_number(v)), v);
    EXPECT_EQ(format_number(1.0 / 0.0), "inf");
}

TEST(Output, CsvRoundTrip)
{
    CsvWriter w({"abc", {{"epsilon", "0.5"}}}, {"t", "p"});
    w.row({"1", "0.5"});
    auto const t = parse_csv(w.str());
    EXPECT_EQ(t.comment("config_digest"), "abc");
    EXPECT_EQ(t.comment("epsilon"), "0.5");
    EXPECT_EQ(t.rows.size(), 1u);
    EXPECT_EQ(t.rows[0][t.column("p")], "0.5");
    EXPECT_THROW(w.row({"1"}), std::logic_error);
}

class Workflow : public ::testing::Test
{
  protected:
    void SetUp() override
    {
        cfg_path = dir.path() / "exp.yaml";
        write_file(cfg_path, kSmallConfig);
        opts.config_path = cfg_path.string();
        opts.out = (dir.path() / "out").string();
        opts.workers = 2;
    }

    TempDir dir;
    fs::path cfg_path;
    GlobalOptions opts;
    std::ostringstream log;
};

TEST_F(Workflow, SimulateIsIdempotent)
{
    ASSERT_EQ(run([&] { return cmd_simulate(opts, log); }), kExitOk);
    auto const first = read_file(dir.path() / "out" / "trajsummary.csv");
    auto const manifest = read_file(dir.path() / "out" / "manifest.json");
    opts.workers = 1;
    ASSERT_EQ(run([&] { return cmd_simulate(opts, log); }), kExitOk);
    EXPECT_EQ(read_file(dir.path() / "out" / "trajsummary.csv"), first);
    EXPECT_EQ(read_file(dir.path() / "out" / "manifest.json"), manifest);
    EXPECT_EQ(first.find('\r'), std::string::npos);
}

TEST_F(Workflow, DigestConflictNeedsForce)
{
    ASSERT_EQ(run([&] { return cmd_simulate(opts, log); }), kExitOk);
    opts.seed = 99;
    EXPECT_EQ(run([&] { return cmd_simulate(opts, log); }), kExitIo);
    opts.force = true;
    EXPECT_EQ(run([&] { return cmd_simulate(opts, log); }), kExitOk);
}

TEST_F(Workflow, TailFitReport)
{
    ASSERT_EQ(run([&] { return cmd_simulate(opts, log); }), kExitOk);
    GlobalOptions read = opts;
    read.config_path.reset();

    TailOptions bad;
    bad.epsilon = 0.2;
    EXPECT_EQ(run([&] { return cmd_tail(read, bad, log); }), kExitConfig);

    TailOptions tail;
    tail.epsilon = 0.32;
    ASSERT_EQ(run([&] { return cmd_tail(read, tail, log); }), kExitOk);
    auto const csv = read_file(dir.path() / "out" / "tail.csv");
    auto const t = read_tail_csv(csv);
    ASSERT_EQ(t.t_grid.size(), 12u);
    EXPECT_EQ(t.exceed_count[0], 400);
    for (std::size_t i = 1; i < t.p_hat.size(); ++i)
        EXPECT_LE(t.p_hat[i], t.p_hat[i - 1]);

    auto const svg = read_file(dir.path() / "out" / "tail.svg");
    EXPECT_EQ(svg.rfind("<svg", 0), 0u);
    EXPECT_EQ(svg.find("href"), std::string::npos);
    EXPECT_NE(svg.find("</svg>"), std::string::npos);

    // 400 runs leave too few estimable points past t = 5.
    FitOptions fit;
    fit.candidates = {"linear", "sqrt"};
    EXPECT_EQ(run([&] { return cmd_fit(read, fit, log); }), kExitInsufficientData);

    EXPECT_EQ(run([&] { return cmd_report(read, log); }), kExitOk);
    EXPECT_TRUE(fs::exists(dir.path() / "out" / "report.md"));
}

TEST_F(Workflow, MissingResults)
{
    TailOptions tail;
    tail.epsilon = 0.32;
    opts.config_path.reset();
    EXPECT_EQ(run([&] { return cmd_tail(opts, tail, log); }), kExitIo);
}

TEST_F(Workflow, VerifyUnknownSuite)
{
    VerifyOptions v;
    v.suite = "nope";
    EXPECT_EQ(run([&] { return cmd_verify(opts, v, log); }), kExitConfig);
    v.suite = "schedules";
    EXPECT_EQ(run([&] { return cmd_verify(opts, v, log); }), kExitOk);
    EXPECT_TRUE(fs::exists(dir.path() / "out" / "verify.csv"));
}

TEST_F(Workflow, RatesAndComparison)
{
    CurveOptions c;
    c.t_grid = {3, 10, 100, 1000};
    GlobalOptions o;
    o.out = opts.out;
    EXPECT_EQ(run([&] { return cmd_rates(o, c, log); }), kExitOk);
    EXPECT_EQ(run([&] { return cmd_compare_sota(o, c, log); }), kExitOk);
    auto const t = parse_csv(read_file(dir.path() / "out" / "rates.csv"));
    EXPECT_NO_THROW(t.column("n_t"));
    EXPECT_NO_THROW(t.column("slope"));
}

int exit_status(std::string const& cmd)
{
    int const s = std::system(cmd.c_str());
    return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
}

TEST(Tool, ExitCodes)
{
    std::string const tool = LDPLAB_TOOL;
    EXPECT_EQ(exit_status(tool + " --version > /dev/null"), 0);
    EXPECT_EQ(exit_status(tool + " --config /nonexistent.yaml simulate 2> /dev/null"), kExitIo);
    EXPECT_EQ(exit_status(tool + " frobnicate 2> /dev/null"), kExitConfig);
}

}  // namespace
}  // namespace ldplab::cli
