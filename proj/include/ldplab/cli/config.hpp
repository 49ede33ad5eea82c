// Copyright 2026 The ldplab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ldplab/optimizers.hpp"
#include "ldplab/theory.hpp"

namespace ldplab::cli {

inline constexpr char const* kToolName = "ldplab";
inline constexpr char const* kToolVersion = "0.1.0";

/// Invalid configuration. `line` and `column` are 1-based, 0 when unknown.
class ConfigError : public std::runtime_error
{
  public:
    ConfigError(std::string const& source, int line, int column, std::string const& message);

    int line() const { return line_; }
    int column() const { return column_; }
    std::string const& detail() const { return detail_; }

  private:
    int line_ = 0;
    int column_ = 0;
    std::string detail_;
};

/// Filesystem failure while reading inputs or writing results.
class IoError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

struct CostBlock
{
    std::string name = "huber";  ///< huber | pseudo-huber | logistic
    double threshold = 1.0;      ///< huber G
    double scale = 1.0;          ///< pseudo-huber
    std::size_t dim = 2;
    std::size_t samples = 200;   ///< logistic: synthetic dataset size
    std::uint64_t data_seed = 1;
};

struct OracleBlock
{
    std::string mode = "additive";  ///< additive | batch | noiseless
    std::string noise = "sphere-bounded";
    double radius = 1.0;
    Vec vector;
    double x_m = 1.0;
    double tail_index = 3.0;
    double p = 2.0;
    double scale = 1.0;
    std::size_t batch_size = 1;
};

struct StepBlock
{
    std::string kind = "sgd-sqrt";
    double a = 1.0;
    double p = 2.0;
    double c = 0.1;
};

struct ClipBlock
{
    std::string kind = "paper-eq5";  ///< paper-eq5 | general-C | constant
    double p = 2.0;
    double G = 1.0;
    double C = 2.0;
    double gamma = 1.0;
};

struct MethodBlock
{
    std::string name = "vanilla";
    Vec x1;
    StepBlock step;
    std::optional<ClipBlock> clip;
};

struct EnsembleBlock
{
    std::int64_t N = 1000;
    std::int64_t T = 100;
    std::uint64_t seed = 1;
    std::vector<double> epsilon_grid;
    std::vector<std::int64_t> t_grid;
};

struct SotaOverlay
{
    std::string kind;
    SotaParams params;
};

struct AnalysisBlock
{
    std::vector<std::string> candidates;  ///< decay family names
    double candidate_p = 2.0;             ///< p for the beta_p families
    std::string csgd_constants = "theorem";
    std::vector<SotaOverlay> sota;
};

struct OutputBlock
{
    std::string directory = "results";
    std::vector<std::string> formats{"csv", "svg"};
};

struct ExperimentConfig
{
    std::string source = "<config>";
    CostBlock cost;
    OracleBlock oracle;
    MethodBlock method;
    EnsembleBlock ensemble;
    AnalysisBlock analysis;
    OutputBlock output;

    /// Source positions of parsed keys ("method.step.a" -> {line, column}).
    std::map<std::string, std::pair<int, int>> marks;
};

/// Parse YAML text. Unknown keys, wrong types and invalid values raise
/// ConfigError anchored at the offending line.
ExperimentConfig parse_config(std::string const& text, std::string const& source = "<config>");
ExperimentConfig load_config(std::string const& path);

/// Semantic checks (a <= 1/L, p in (1,2], Pareto index > p, sorted grids, ...).
void validate_config(ExperimentConfig const& config);

ExperimentConfig preset(std::string const& name);
std::vector<std::string> preset_names();

/// Canonical JSON for everything except the output block.
std::string canonical_json(ExperimentConfig const& config);
/// 16 hex digits of FNV-1a 64 over canonical_json.
std::string config_digest(ExperimentConfig const& config);

/// YAML rendering that parse_config reads back to the same config.
std::string to_yaml(ExperimentConfig const& config);

RunConfig build_run_config(ExperimentConfig const& config);

/// Constants the bounds rely on, as (name, value) pairs in a fixed order.
std::vector<std::pair<std::string, double>> certified_constants(ExperimentConfig const& config);

/// Theory rate matching the configured method, if one applies.
std::optional<RateSpec> theory_rate(ExperimentConfig const& config);

}  // namespace ldplab::cli
