// Copyright 2026 The ldplab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ldplab/cli/config.hpp"
#include "ldplab/montecarlo.hpp"

namespace ldplab::cli {

enum ExitCode : int
{
    kExitOk = 0,
    kExitConfig = 2,
    kExitIo = 3,
    kExitInsufficientData = 4,
    kExitVerification = 5,
};

/// Results directory already holds output for a different config digest.
class DigestConflict : public IoError
{
  public:
    using IoError::IoError;
};

struct GlobalOptions
{
    std::optional<std::string> config_path;
    std::optional<std::string> preset;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> runs;  ///< overrides ensemble.N
    unsigned workers = 0;
    std::optional<std::string> out;
    bool force = false;
};

/// Config from --config or --preset with --seed / --runs applied.
ExperimentConfig resolve_config(GlobalOptions const& opts);

/// --out, then $LDPLAB_OUT, then the config's output.directory.
std::filesystem::path resolve_output_dir(GlobalOptions const& opts, ExperimentConfig const* config);

/// Results directory for commands that read a previous simulation.
std::filesystem::path resolve_results_dir(GlobalOptions const& opts);

int cmd_simulate(GlobalOptions const& opts, std::ostream& log);

struct TailOptions
{
    std::optional<double> epsilon;
    std::vector<std::int64_t> t_grid;
};
int cmd_tail(GlobalOptions const& opts, TailOptions const& tail, std::ostream& log);

struct FitOptions
{
    std::optional<std::string> tail_csv;
    std::vector<std::string> candidates;
    std::optional<double> candidate_p;
};
int cmd_fit(GlobalOptions const& opts, FitOptions const& fit, std::ostream& log);

struct VerifyOptions
{
    std::string suite = "all";
    std::size_t samples = 1'000'000;
    std::uint64_t seed = 0x1e44a;
};
int cmd_verify(GlobalOptions const& opts, VerifyOptions const& verify, std::ostream& log);

struct CurveOptions
{
    double epsilon = 1.0;
    std::vector<std::int64_t> t_grid;
};
int cmd_rates(GlobalOptions const& opts, CurveOptions const& curves, std::ostream& log);
int cmd_compare_sota(GlobalOptions const& opts, CurveOptions const& curves, std::ostream& log);

int cmd_report(GlobalOptions const& opts, std::ostream& log);

/// Runs `body` and maps the library's exceptions to exit codes, printing the
/// message to `err`.
int guarded(std::function<int()> const& body, std::ostream& err);

//---------------------------------------------------------------------------//
// Building blocks shared with the test suites
//---------------------------------------------------------------------------//

struct VerifyRow
{
    std::string suite;
    std::string check;
    double empirical = 0.0;
    double bound = 0.0;
    double standard_error = 0.0;
    double slack = 0.0;
    std::int64_t violations = 0;
    bool pass = false;
};

std::vector<std::string> verify_suite_names();

/// Runs one named suite ("appendix-f-enum", "rates", "schedules", or a lemma
/// suite) with its built-in parameters.
std::vector<VerifyRow> run_verify_suite(std::string const& name, std::size_t samples,
                                        std::uint64_t seed);

/// Worst relative error between the closed-form rate function and the
/// numerical transform of its phi on x in [0, 10].
double rate_transform_error(RateSpec const& rate);

/// Lean ensemble output as written to trajsummary.csv.
std::string trajsummary_csv(ExperimentConfig const& config, EnsembleSummary const& summary);
EnsembleSummary read_trajsummary(std::string const& text, ExperimentConfig const& config);

std::string tail_csv(TailEstimate const& tail);
TailEstimate read_tail_csv(std::string const& text);

}  // namespace ldplab::cli
