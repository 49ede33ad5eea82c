// Copyright 2026 The ldplab Authors
// SPDX-License-Identifier: Apache-2.0
#include "ldplab/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string_view>

#include <fmt/format.h>
#include <fmt/ranges.h>
#include <yaml-cpp/yaml.h>

#include "json.hpp"
#include "ldplab/costs.hpp"
#include "ldplab/oracles.hpp"
#include "ldplab/rng.hpp"

namespace ldplab::cli {

namespace {

std::string format_error(std::string const& source, int line, int column, std::string const& msg)
{
    if (line > 0)
        return fmt::format("{}:{}:{}: {}", source, line, column, msg);
    return fmt::format("{}: {}", source, msg);
}

}  // namespace

ConfigError::ConfigError(std::string const& source, int line, int column, std::string const& message)
    : std::runtime_error(format_error(source, line, column, message)),
      line_(line),
      column_(column),
      detail_(message)
{
}

namespace {

//---------------------------------------------------------------------------//
// YAML reading
//---------------------------------------------------------------------------//

class Reader
{
  public:
    explicit Reader(ExperimentConfig& cfg) : cfg_(cfg) {}

    [[noreturn]] void fail(YAML::Node const& node, std::string const& msg) const
    {
        auto const m = node.Mark();
        if (m.is_null())
            throw ConfigError(cfg_.source, 0, 0, msg);
        throw ConfigError(cfg_.source, m.line + 1, m.column + 1, msg);
    }

    void remember(YAML::Node const& node, std::string const& path)
    {
        auto const m = node.Mark();
        if (!m.is_null())
            cfg_.marks[path] = {m.line + 1, m.column + 1};
    }

    void require_map(YAML::Node const& node, std::string const& path) const
    {
        if (!node.IsMap())
            fail(node, fmt::format("'{}' must be a mapping", path));
    }

    void check_keys(YAML::Node const& node, std::string const& path,
                    std::initializer_list<std::string_view> allowed) const
    {
        require_map(node, path);
        for (auto const& kv : node)
        {
            auto const key = kv.first.as<std::string>();
            if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
                fail(kv.first, fmt::format("unknown key '{}{}{}' (allowed: {})", path,
                                           path.empty() ? "" : ".", key,
                                           fmt::join(allowed, ", ")));
        }
    }

    template<class T>
    void read(YAML::Node const& parent, char const* key, std::string const& path, T& out)
    {
        auto const node = parent[key];
        if (!node)
            return;
        std::string const full = path + "." + key;
        remember(node, full);
        if (!node.IsScalar())
            fail(node, fmt::format("'{}' must be a scalar", full));
        try
        {
            out = node.as<T>();
        }
        catch (YAML::Exception const&)
        {
            fail(node, fmt::format("'{}' has the wrong type (got '{}')", full, node.Scalar()));
        }
        if constexpr (std::is_floating_point_v<T>)
            if (!std::isfinite(out))
                fail(node, fmt::format("'{}' must be finite", full));
    }

    template<class T>
    void read_list(YAML::Node const& parent, char const* key, std::string const& path,
                   std::vector<T>& out)
    {
        auto const node = parent[key];
        if (!node)
            return;
        std::string const full = path + "." + key;
        remember(node, full);
        if (!node.IsSequence())
            fail(node, fmt::format("'{}' must be a list", full));
        out.clear();
        for (auto const& item : node)
        {
            if (!item.IsScalar())
                fail(item, fmt::format("'{}' entries must be scalars", full));
            try
            {
                out.push_back(item.as<T>());
            }
            catch (YAML::Exception const&)
            {
                fail(item, fmt::format("'{}' entry '{}' has the wrong type", full, item.Scalar()));
            }
        }
    }

  private:
    ExperimentConfig& cfg_;
};

void parse_cost(Reader& r, YAML::Node const& n, CostBlock& b)
{
    r.check_keys(n, "cost", {"name", "threshold", "scale", "dim", "samples", "data_seed"});
    r.read(n, "name", "cost", b.name);
    r.read(n, "threshold", "cost", b.threshold);
    r.read(n, "scale", "cost", b.scale);
    r.read(n, "dim", "cost", b.dim);
    r.read(n, "samples", "cost", b.samples);
    r.read(n, "data_seed", "cost", b.data_seed);
}

void parse_oracle(Reader& r, YAML::Node const& n, OracleBlock& b)
{
    r.check_keys(n, "oracle", {"mode", "noise", "radius", "vector", "x_m", "tail_index", "p",
                               "scale", "batch_size"});
    r.read(n, "mode", "oracle", b.mode);
    r.read(n, "noise", "oracle", b.noise);
    r.read(n, "radius", "oracle", b.radius);
    r.read_list(n, "vector", "oracle", b.vector);
    r.read(n, "x_m", "oracle", b.x_m);
    r.read(n, "tail_index", "oracle", b.tail_index);
    r.read(n, "p", "oracle", b.p);
    r.read(n, "scale", "oracle", b.scale);
    r.read(n, "batch_size", "oracle", b.batch_size);
}

void parse_method(Reader& r, YAML::Node const& n, MethodBlock& b)
{
    r.check_keys(n, "method", {"name", "x1", "step", "clip"});
    r.read(n, "name", "method", b.name);
    r.read_list(n, "x1", "method", b.x1);
    if (auto s = n["step"])
    {
        r.remember(s, "method.step");
        r.check_keys(s, "method.step", {"kind", "a", "p", "c"});
        r.read(s, "kind", "method.step", b.step.kind);
        r.read(s, "a", "method.step", b.step.a);
        r.read(s, "p", "method.step", b.step.p);
        r.read(s, "c", "method.step", b.step.c);
    }
    if (auto c = n["clip"])
    {
        r.remember(c, "method.clip");
        if (c.IsNull())
        {
            b.clip.reset();
            return;
        }
        r.check_keys(c, "method.clip", {"kind", "p", "G", "C", "gamma"});
        ClipBlock cb;
        r.read(c, "kind", "method.clip", cb.kind);
        r.read(c, "p", "method.clip", cb.p);
        r.read(c, "G", "method.clip", cb.G);
        r.read(c, "C", "method.clip", cb.C);
        r.read(c, "gamma", "method.clip", cb.gamma);
        b.clip = cb;
    }
}

void parse_ensemble(Reader& r, YAML::Node const& n, EnsembleBlock& b)
{
    r.check_keys(n, "ensemble", {"N", "T", "seed", "epsilon_grid", "t_grid"});
    r.read(n, "N", "ensemble", b.N);
    r.read(n, "T", "ensemble", b.T);
    r.read(n, "seed", "ensemble", b.seed);
    r.read_list(n, "epsilon_grid", "ensemble", b.epsilon_grid);
    r.read_list(n, "t_grid", "ensemble", b.t_grid);
}

void parse_analysis(Reader& r, YAML::Node const& n, AnalysisBlock& b)
{
    r.check_keys(n, "analysis", {"candidates", "candidate_p", "csgd_constants", "sota"});
    r.read_list(n, "candidates", "analysis", b.candidates);
    r.read(n, "candidate_p", "analysis", b.candidate_p);
    r.read(n, "csgd_constants", "analysis", b.csgd_constants);
    if (auto s = n["sota"])
    {
        r.remember(s, "analysis.sota");
        if (!s.IsSequence())
            r.fail(s, "'analysis.sota' must be a list");
        b.sota.clear();
        for (std::size_t i = 0; i < s.size(); ++i)
        {
            auto const item = s[i];
            std::string const path = fmt::format("analysis.sota[{}]", i);
            r.remember(item, path);
            r.check_keys(item, path, {"kind", "B", "sigma", "delta", "L", "C", "p"});
            SotaOverlay o;
            r.read(item, "kind", path, o.kind);
            auto opt = [&](char const* key, std::optional<double>& out) {
                if (item[key])
                {
                    double v = 0.0;
                    r.read(item, key, path, v);
                    out = v;
                }
            };
            opt("B", o.params.B);
            opt("sigma", o.params.sigma);
            opt("delta", o.params.delta);
            opt("L", o.params.L);
            opt("C", o.params.C);
            opt("p", o.params.p);
            b.sota.push_back(std::move(o));
        }
    }
}

void parse_output(Reader& r, YAML::Node const& n, OutputBlock& b)
{
    r.check_keys(n, "output", {"directory", "formats"});
    r.read(n, "directory", "output", b.directory);
    r.read_list(n, "formats", "output", b.formats);
}

//---------------------------------------------------------------------------//
// Semantic validation
//---------------------------------------------------------------------------//

[[noreturn]] void fail_at(ExperimentConfig const& cfg, std::string const& path, std::string const& msg)
{
    // Walk up the key path until a recorded position is found.
    std::string p = path;
    while (!p.empty())
    {
        auto it = cfg.marks.find(p);
        if (it != cfg.marks.end())
            throw ConfigError(cfg.source, it->second.first, it->second.second, msg);
        auto const dot = p.find_last_of('.');
        p = dot == std::string::npos ? std::string{} : p.substr(0, dot);
    }
    throw ConfigError(cfg.source, 0, 0, msg);
}

bool moment_order_ok(double p)
{
    return p > 1.0 && p <= 2.0;
}

std::vector<LabeledSample> synthetic_dataset(CostBlock const& b)
{
    RandomStream stream(b.data_seed, 0);
    Vec w(b.dim);
    for (auto& v : w)
        v = stream.normal();
    std::vector<LabeledSample> data(b.samples);
    for (auto& s : data)
    {
        s.features.resize(b.dim);
        for (auto& v : s.features)
            v = stream.normal();
        double const margin = dot(w, s.features);
        bool const flip = stream.uniform() < 0.1;
        s.label = ((margin >= 0.0) != flip) ? 1.0 : -1.0;
    }
    return data;
}

CostSpec make_cost(ExperimentConfig const& cfg)
{
    auto const& b = cfg.cost;
    if (b.dim < 1)
        fail_at(cfg, "cost.dim", "cost.dim must be >= 1");
    if (b.name == "huber")
    {
        if (!(b.threshold > 0.0))
            fail_at(cfg, "cost.threshold", "cost.threshold must be positive");
        return huber_cost(b.threshold, b.dim);
    }
    if (b.name == "pseudo-huber")
    {
        if (!(b.scale > 0.0))
            fail_at(cfg, "cost.scale", "cost.scale must be positive");
        return pseudo_huber_cost(b.scale, b.dim);
    }
    if (b.name == "logistic")
    {
        if (b.samples < 2)
            fail_at(cfg, "cost.samples", "cost.samples must be >= 2");
        return batch_loss_cost(synthetic_dataset(b));
    }
    fail_at(cfg, "cost.name",
            fmt::format("unknown cost '{}' (expected huber, pseudo-huber or logistic)", b.name));
}

NoiseModel make_noise(ExperimentConfig const& cfg)
{
    auto const& b = cfg.oracle;
    std::size_t const d = cfg.cost.dim;
    NoiseKind kind{};
    try
    {
        kind = noise_kind_from_string(b.noise);
    }
    catch (std::invalid_argument const& e)
    {
        fail_at(cfg, "oracle.noise", e.what());
    }
    switch (kind)
    {
        case NoiseKind::SphereBounded:
            if (!(b.radius >= 0.0))
                fail_at(cfg, "oracle.radius", "oracle.radius must be non-negative");
            return NoiseModel::sphere(d, b.radius);
        case NoiseKind::TwoPoint:
            if (b.vector.size() != d)
                fail_at(cfg, "oracle.vector",
                        fmt::format("oracle.vector has {} entries, the cost has dimension {}",
                                    b.vector.size(), d));
            return NoiseModel::two_point(b.vector);
        case NoiseKind::SymmetrizedPareto:
            if (!moment_order_ok(b.p))
                fail_at(cfg, "oracle.p", "oracle.p must lie in (1, 2]");
            if (!(b.x_m > 0.0))
                fail_at(cfg, "oracle.x_m", "oracle.x_m must be positive");
            if (!(b.tail_index > b.p))
                fail_at(cfg, "oracle.tail_index",
                        fmt::format("Pareto tail index {} must exceed p = {} for a finite p-th moment",
                                    b.tail_index, b.p));
            return NoiseModel::pareto(d, b.x_m, b.tail_index, b.p);
        case NoiseKind::Gaussian:
            if (!(b.scale > 0.0))
                fail_at(cfg, "oracle.scale", "oracle.scale must be positive");
            return NoiseModel::gaussian(d, b.scale);
    }
    fail_at(cfg, "oracle.noise", "unknown noise kind");
}

std::shared_ptr<Oracle const> make_oracle(ExperimentConfig const& cfg)
{
    auto cost = make_cost(cfg);
    auto const& b = cfg.oracle;
    if (b.mode == "noiseless")
        return std::make_shared<Oracle const>(Oracle::noiseless(cost));
    if (b.mode == "additive")
        return std::make_shared<Oracle const>(Oracle::additive(cost, make_noise(cfg)));
    if (b.mode == "batch")
    {
        auto fs = std::dynamic_pointer_cast<FiniteSumCost const>(cost);
        if (!fs)
            fail_at(cfg, "oracle.mode", "batch mode needs the logistic finite-sum cost");
        if (b.batch_size < 1 || b.batch_size >= fs->num_samples())
            fail_at(cfg, "oracle.batch_size",
                    fmt::format("batch_size must lie in [1, {})", fs->num_samples()));
        return std::make_shared<Oracle const>(Oracle::batch(fs, b.batch_size));
    }
    fail_at(cfg, "oracle.mode",
            fmt::format("unknown oracle mode '{}' (expected additive, batch or noiseless)", b.mode));
}

ScheduleSpec make_step(ExperimentConfig const& cfg)
{
    auto const& s = cfg.method.step;
    if (s.kind == "sgd-sqrt")
        return ScheduleSpec::sgd_sqrt(s.a);
    if (s.kind == "csgd-power")
    {
        if (!moment_order_ok(s.p))
            fail_at(cfg, "method.step.p", "method.step.p must lie in (1, 2]");
        return ScheduleSpec::csgd_power(s.p);
    }
    if (s.kind == "constant")
        return ScheduleSpec::constant(s.c);
    fail_at(cfg, "method.step.kind",
            fmt::format("unknown step kind '{}' (expected sgd-sqrt, csgd-power or constant)", s.kind));
}

std::optional<ClipSpec> make_clip(ExperimentConfig const& cfg)
{
    if (!cfg.method.clip)
        return std::nullopt;
    auto const& c = *cfg.method.clip;
    if (c.kind != "constant" && !moment_order_ok(c.p))
        fail_at(cfg, "method.clip.p", "method.clip.p must lie in (1, 2]");
    if (c.kind == "paper-eq5")
    {
        if (!(c.G > 0.0))
            fail_at(cfg, "method.clip.G", "method.clip.G must be positive");
        return ClipSpec::paper_eq5(c.p, c.G);
    }
    if (c.kind == "general-C")
    {
        if (!(c.C > 0.0))
            fail_at(cfg, "method.clip.C", "method.clip.C must be positive");
        return ClipSpec::general(c.p, c.C);
    }
    if (c.kind == "constant")
    {
        if (!(c.gamma > 0.0))
            fail_at(cfg, "method.clip.gamma", "method.clip.gamma must be positive");
        return ClipSpec::constant(c.gamma);
    }
    fail_at(cfg, "method.clip.kind",
            fmt::format("unknown clip kind '{}' (expected paper-eq5, general-C or constant)", c.kind));
}

CsgdConstants csgd_constants(ExperimentConfig const& cfg)
{
    if (cfg.analysis.csgd_constants == "theorem")
        return CsgdConstants::Theorem;
    if (cfg.analysis.csgd_constants == "corollary")
        return CsgdConstants::Corollary;
    fail_at(cfg, "analysis.csgd_constants", "analysis.csgd_constants must be theorem or corollary");
}

}  // namespace

//---------------------------------------------------------------------------//

ExperimentConfig parse_config(std::string const& text, std::string const& source)
{
    ExperimentConfig cfg;
    cfg.source = source;
    YAML::Node root;
    try
    {
        root = YAML::Load(text);
    }
    catch (YAML::ParserException const& e)
    {
        throw ConfigError(source, e.mark.line + 1, e.mark.column + 1, e.msg);
    }
    Reader r(cfg);
    if (!root || root.IsNull())
        throw ConfigError(source, 0, 0, "configuration is empty");
    r.check_keys(root, "", {"cost", "oracle", "method", "ensemble", "analysis", "output"});
    auto block = [&](char const* key, auto&& fn) {
        if (auto n = root[key])
        {
            r.remember(n, key);
            fn(n);
        }
        else if (std::string_view(key) != "analysis" && std::string_view(key) != "output")
        {
            throw ConfigError(source, 0, 0, fmt::format("missing required block '{}'", key));
        }
    };
    block("cost", [&](auto const& n) { parse_cost(r, n, cfg.cost); });
    block("oracle", [&](auto const& n) { parse_oracle(r, n, cfg.oracle); });
    block("method", [&](auto const& n) { parse_method(r, n, cfg.method); });
    block("ensemble", [&](auto const& n) { parse_ensemble(r, n, cfg.ensemble); });
    block("analysis", [&](auto const& n) { parse_analysis(r, n, cfg.analysis); });
    block("output", [&](auto const& n) { parse_output(r, n, cfg.output); });
    validate_config(cfg);
    return cfg;
}

ExperimentConfig load_config(std::string const& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError(fmt::format("cannot read config file '{}'", path));
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

void validate_config(ExperimentConfig const& cfg)
{
    auto const oracle = make_oracle(cfg);
    double const L = oracle->cost().smoothness();

    auto const& m = cfg.method;
    if (m.name != "vanilla" && m.name != "clipped")
        fail_at(cfg, "method.name", fmt::format("unknown method '{}' (expected vanilla or clipped)", m.name));
    if (m.x1.size() != cfg.cost.dim)
        fail_at(cfg, "method.x1",
                fmt::format("method.x1 has {} entries, the cost has dimension {}", m.x1.size(),
                            cfg.cost.dim));
    auto const step = make_step(cfg);
    if (step.kind == StepKind::SgdSqrt)
    {
        if (!(step.a > 0.0))
            fail_at(cfg, "method.step.a", "method.step.a must be positive");
        if (step.a * L > 1.0)
            fail_at(cfg, "method.step.a",
                    fmt::format("step coefficient a = {} exceeds 1/L = {}", step.a, 1.0 / L));
    }
    if (step.kind == StepKind::Constant && !(step.c > 0.0))
        fail_at(cfg, "method.step.c", "method.step.c must be positive");
    auto const clip = make_clip(cfg);
    if (m.name == "vanilla" && clip)
        fail_at(cfg, "method.clip", "vanilla SGD takes no clip block");
    if (m.name == "clipped" && !clip)
        fail_at(cfg, "method", "clipped SGD needs a clip block");

    auto const& e = cfg.ensemble;
    if (e.N < 1)
        fail_at(cfg, "ensemble.N", "ensemble.N must be >= 1");
    if (e.T < 1)
        fail_at(cfg, "ensemble.T", "ensemble.T must be >= 1");
    if (e.epsilon_grid.empty())
        fail_at(cfg, "ensemble.epsilon_grid", "ensemble.epsilon_grid must not be empty");
    for (std::size_t i = 0; i < e.epsilon_grid.size(); ++i)
    {
        if (!(e.epsilon_grid[i] > 0.0))
            fail_at(cfg, "ensemble.epsilon_grid", "ensemble.epsilon_grid entries must be positive");
        if (i > 0 && !(e.epsilon_grid[i] > e.epsilon_grid[i - 1]))
            fail_at(cfg, "ensemble.epsilon_grid",
                    "ensemble.epsilon_grid must be sorted strictly increasing");
    }
    for (std::size_t i = 0; i < e.t_grid.size(); ++i)
    {
        if (e.t_grid[i] < 1 || e.t_grid[i] > e.T)
            fail_at(cfg, "ensemble.t_grid",
                    fmt::format("ensemble.t_grid entry {} lies outside [1, T = {}]", e.t_grid[i], e.T));
        if (i > 0 && e.t_grid[i] <= e.t_grid[i - 1])
            fail_at(cfg, "ensemble.t_grid", "ensemble.t_grid must be sorted strictly increasing");
    }

    auto const& a = cfg.analysis;
    for (auto const& c : a.candidates)
    {
        try
        {
            decay_family_from_string(c);
        }
        catch (std::invalid_argument const& ex)
        {
            fail_at(cfg, "analysis.candidates", ex.what());
        }
    }
    if (!moment_order_ok(a.candidate_p))
        fail_at(cfg, "analysis.candidate_p", "analysis.candidate_p must lie in (1, 2]");
    csgd_constants(cfg);
    for (std::size_t i = 0; i < a.sota.size(); ++i)
    {
        try
        {
            sota_curve(sota_kind_from_string(a.sota[i].kind), a.sota[i].params);
        }
        catch (std::invalid_argument const& ex)
        {
            fail_at(cfg, fmt::format("analysis.sota[{}]", i), ex.what());
        }
    }
    for (auto const& f : cfg.output.formats)
        if (f != "csv" && f != "svg")
            fail_at(cfg, "output.formats", fmt::format("unknown output format '{}'", f));

    try
    {
        build_run_config(cfg).validate();
    }
    catch (std::invalid_argument const& ex)
    {
        fail_at(cfg, "method", ex.what());
    }
}

RunConfig build_run_config(ExperimentConfig const& cfg)
{
    RunConfig rc;
    rc.method = cfg.method.name == "clipped" ? Method::Clipped : Method::Vanilla;
    rc.oracle = make_oracle(cfg);
    rc.init_x1 = cfg.method.x1;
    rc.horizon = cfg.ensemble.T;
    rc.step = make_step(cfg);
    rc.clip = make_clip(cfg);
    rc.seed = cfg.ensemble.seed;
    rc.epsilon_grid = cfg.ensemble.epsilon_grid;
    return rc;
}

std::optional<RateSpec> theory_rate(ExperimentConfig const& cfg)
{
    auto const oracle = make_oracle(cfg);
    double const G = oracle->cost().grad_bound();
    if (cfg.method.name == "vanilla")
    {
        auto const M = oracle->noise_bound();
        if (!M || !(*M > 0.0))
            return std::nullopt;
        return rate_sgd(*M, G);
    }
    auto const clip = make_clip(cfg);
    if (!clip)
        return std::nullopt;
    switch (clip->kind)
    {
        case ClipKind::PaperEq5: return rate_csgd(G, clip->p, csgd_constants(cfg));
        case ClipKind::GeneralC: return rate_csgd_general(G, clip->value, clip->p);
        case ClipKind::Constant: return std::nullopt;
    }
    return std::nullopt;
}

std::vector<std::pair<std::string, double>> certified_constants(ExperimentConfig const& cfg)
{
    auto const oracle = make_oracle(cfg);
    auto const& cost = oracle->cost();
    std::vector<std::pair<std::string, double>> out{
        {"L", cost.smoothness()},
        {"G", cost.grad_bound()},
        {"f_star_lower", cost.lower_bound()},
    };
    if (oracle->mode() == OracleMode::BatchSubsample)
    {
        out.emplace_back("G_l", 0.5 * *oracle->noise_bound());
        out.emplace_back("noise_bound", *oracle->noise_bound());
    }
    else if (oracle->mode() == OracleMode::AdditiveNoise)
    {
        if (auto M = oracle->noise().as_bound())
            out.emplace_back("M", *M);
        double const p = cfg.oracle.noise == "symmetrized-pareto" ? cfg.oracle.p
                         : cfg.method.clip                        ? cfg.method.clip->p
                                                                  : 2.0;
        try
        {
            out.emplace_back("p", p);
            out.emplace_back("sigma_p", certify_moment(oracle->noise(), p));
        }
        catch (std::invalid_argument const&)
        {
            out.pop_back();
        }
    }
    if (auto r = theory_rate(cfg))
        out.emplace_back("rate_coefficient", r->rate_coefficient);
    return out;
}

//---------------------------------------------------------------------------//
// Presets
//---------------------------------------------------------------------------//

std::vector<std::string> preset_names()
{
    return {"appendix-f", "sgd-bounded", "csgd-pareto"};
}

ExperimentConfig preset(std::string const& name)
{
    ExperimentConfig c;
    c.source = "preset " + name;
    if (name == "appendix-f")
    {
        // Huber with G = 1, |x1| = 0.8, noise +x1 / -x1, alpha_t = 1/(2 sqrt(t+1)).
        c.cost = {"huber", 1.0, 1.0, 2, 200, 1};
        c.oracle.mode = "additive";
        c.oracle.noise = "two-point";
        c.oracle.vector = {0.48, 0.64};
        c.method.name = "vanilla";
        c.method.x1 = {0.48, 0.64};
        c.method.step = {"sgd-sqrt", 0.5, 2.0, 0.1};
        c.ensemble.N = std::int64_t{1} << 20;
        c.ensemble.T = 15;
        c.ensemble.seed = 20240601;
        c.ensemble.epsilon_grid = {0.05, 0.16, 0.32, 0.7};
        for (std::int64_t t = 1; t <= 15; ++t)
            c.ensemble.t_grid.push_back(t);
        c.analysis.candidates = {"linear", "t-over-log", "sqrt"};
        c.output.directory = "results/appendix-f";
    }
    else if (name == "sgd-bounded")
    {
        c.cost = {"pseudo-huber", 1.0, 1.0, 2, 200, 1};
        c.oracle.mode = "additive";
        c.oracle.noise = "sphere-bounded";
        c.oracle.radius = 1.0;
        c.method.name = "vanilla";
        c.method.x1 = {3.0, -2.0};
        c.method.step = {"sgd-sqrt", 1.0, 2.0, 0.1};
        c.ensemble.N = 20000;
        c.ensemble.T = 400;
        c.ensemble.seed = 7;
        c.ensemble.epsilon_grid = {0.002, 0.005, 0.01, 0.05};
        c.ensemble.t_grid = {3, 5, 10, 20, 30, 50, 75, 100, 150, 200, 300, 400};
        c.analysis.candidates = {"t-over-log", "sqrt", "linear"};
        c.analysis.sota = {{"liu-sgd", SotaParams{.B = 1.0}},
                           {"armacki-nsgd", SotaParams{.L = 1.0, .C = 1.0}}};
        c.output.directory = "results/sgd-bounded";
    }
    else if (name == "csgd-pareto")
    {
        c.cost = {"pseudo-huber", 1.0, 1.0, 2, 200, 1};
        c.oracle.mode = "additive";
        c.oracle.noise = "symmetrized-pareto";
        c.oracle.x_m = 1.0;
        c.oracle.tail_index = 2.0;
        c.oracle.p = 1.5;
        c.method.name = "clipped";
        c.method.x1 = {3.0, -2.0};
        c.method.step = {"csgd-power", 1.0, 1.5, 0.1};
        c.method.clip = ClipBlock{"paper-eq5", 1.5, std::sqrt(2.0), 2.0, 1.0};
        c.ensemble.N = 20000;
        c.ensemble.T = 400;
        c.ensemble.seed = 11;
        c.ensemble.epsilon_grid = {0.002, 0.005, 0.01, 0.05};
        c.ensemble.t_grid = {3, 5, 10, 20, 30, 50, 75, 100, 150, 200, 300, 400};
        c.analysis.candidates = {"tbeta-over-log", "tbetahalf-over-logpow", "sqrt"};
        c.analysis.candidate_p = 1.5;
        c.analysis.sota = {{"nguyen-csgd", SotaParams{.sigma = std::pow(4.0, 1.0 / 1.5),
                                                      .delta = std::sqrt(10.0) + std::sqrt(5.0) - 2.0,
                                                      .L = 1.0,
                                                      .p = 1.5}}};
        c.output.directory = "results/csgd-pareto";
    }
    else
    {
        throw ConfigError("<preset>", 0, 0,
                          fmt::format("unknown preset '{}' (expected {})", name,
                                      fmt::join(preset_names(), ", ")));
    }
    validate_config(c);
    return c;
}

//---------------------------------------------------------------------------//
// Canonical forms
//---------------------------------------------------------------------------//

namespace {

nlohmann::json sota_json(SotaOverlay const& o)
{
    nlohmann::json j;
    j["kind"] = o.kind;
    auto put = [&](char const* k, std::optional<double> const& v) {
        if (v)
            j[k] = *v;
    };
    put("B", o.params.B);
    put("sigma", o.params.sigma);
    put("delta", o.params.delta);
    put("L", o.params.L);
    put("C", o.params.C);
    put("p", o.params.p);
    return j;
}

nlohmann::json config_json(ExperimentConfig const& c)
{
    nlohmann::json j;
    j["cost"] = {{"name", c.cost.name},       {"threshold", c.cost.threshold},
                 {"scale", c.cost.scale},     {"dim", c.cost.dim},
                 {"samples", c.cost.samples}, {"data_seed", c.cost.data_seed}};
    j["oracle"] = {{"mode", c.oracle.mode},     {"noise", c.oracle.noise},
                   {"radius", c.oracle.radius}, {"vector", c.oracle.vector},
                   {"x_m", c.oracle.x_m},       {"tail_index", c.oracle.tail_index},
                   {"p", c.oracle.p},           {"scale", c.oracle.scale},
                   {"batch_size", c.oracle.batch_size}};
    nlohmann::json m = {{"name", c.method.name},
                        {"x1", c.method.x1},
                        {"step",
                         {{"kind", c.method.step.kind},
                          {"a", c.method.step.a},
                          {"p", c.method.step.p},
                          {"c", c.method.step.c}}}};
    if (c.method.clip)
        m["clip"] = {{"kind", c.method.clip->kind},
                     {"p", c.method.clip->p},
                     {"G", c.method.clip->G},
                     {"C", c.method.clip->C},
                     {"gamma", c.method.clip->gamma}};
    else
        m["clip"] = nullptr;
    j["method"] = m;
    j["ensemble"] = {{"N", c.ensemble.N},
                     {"T", c.ensemble.T},
                     {"seed", c.ensemble.seed},
                     {"epsilon_grid", c.ensemble.epsilon_grid},
                     {"t_grid", c.ensemble.t_grid}};
    nlohmann::json sota = nlohmann::json::array();
    for (auto const& o : c.analysis.sota)
        sota.push_back(sota_json(o));
    j["analysis"] = {{"candidates", c.analysis.candidates},
                     {"candidate_p", c.analysis.candidate_p},
                     {"csgd_constants", c.analysis.csgd_constants},
                     {"sota", sota}};
    return j;
}

std::string yaml_number(double v)
{
    return fmt::format("{}", v);
}

template<class T>
std::string yaml_list(std::vector<T> const& v)
{
    return fmt::format("[{}]", fmt::join(v, ", "));
}

}  // namespace

std::string canonical_json(ExperimentConfig const& config)
{
    return config_json(config).dump();
}

std::string config_digest(ExperimentConfig const& config)
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : canonical_json(config))
    {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    return fmt::format("{:016x}", h);
}

std::string to_yaml(ExperimentConfig const& c)
{
    std::string s;
    auto line = [&](std::string const& text) {
        s += text;
        s += '\n';
    };
    line("cost:");
    line("  name: " + c.cost.name);
    line("  threshold: " + yaml_number(c.cost.threshold));
    line("  scale: " + yaml_number(c.cost.scale));
    line(fmt::format("  dim: {}", c.cost.dim));
    line(fmt::format("  samples: {}", c.cost.samples));
    line(fmt::format("  data_seed: {}", c.cost.data_seed));
    line("oracle:");
    line("  mode: " + c.oracle.mode);
    line("  noise: " + c.oracle.noise);
    line("  radius: " + yaml_number(c.oracle.radius));
    line("  vector: " + yaml_list(c.oracle.vector));
    line("  x_m: " + yaml_number(c.oracle.x_m));
    line("  tail_index: " + yaml_number(c.oracle.tail_index));
    line("  p: " + yaml_number(c.oracle.p));
    line("  scale: " + yaml_number(c.oracle.scale));
    line(fmt::format("  batch_size: {}", c.oracle.batch_size));
    line("method:");
    line("  name: " + c.method.name);
    line("  x1: " + yaml_list(c.method.x1));
    line("  step:");
    line("    kind: " + c.method.step.kind);
    line("    a: " + yaml_number(c.method.step.a));
    line("    p: " + yaml_number(c.method.step.p));
    line("    c: " + yaml_number(c.method.step.c));
    if (c.method.clip)
    {
        line("  clip:");
        line("    kind: " + c.method.clip->kind);
        line("    p: " + yaml_number(c.method.clip->p));
        line("    G: " + yaml_number(c.method.clip->G));
        line("    C: " + yaml_number(c.method.clip->C));
        line("    gamma: " + yaml_number(c.method.clip->gamma));
    }
    line("ensemble:");
    line(fmt::format("  N: {}", c.ensemble.N));
    line(fmt::format("  T: {}", c.ensemble.T));
    line(fmt::format("  seed: {}", c.ensemble.seed));
    line("  epsilon_grid: " + yaml_list(c.ensemble.epsilon_grid));
    line("  t_grid: " + yaml_list(c.ensemble.t_grid));
    line("analysis:");
    line("  candidates: " + yaml_list(c.analysis.candidates));
    line("  candidate_p: " + yaml_number(c.analysis.candidate_p));
    line("  csgd_constants: " + c.analysis.csgd_constants);
    if (c.analysis.sota.empty())
    {
        line("  sota: []");
    }
    else
    {
        line("  sota:");
        for (auto const& o : c.analysis.sota)
        {
            line("    - kind: " + o.kind);
            auto put = [&](char const* k, std::optional<double> const& v) {
                if (v)
                    line(fmt::format("      {}: {}", k, yaml_number(*v)));
            };
            put("B", o.params.B);
            put("sigma", o.params.sigma);
            put("delta", o.params.delta);
            put("L", o.params.L);
            put("C", o.params.C);
            put("p", o.params.p);
        }
    }
    line("output:");
    line("  directory: " + c.output.directory);
    line("  formats: " + yaml_list(c.output.formats));
    return s;
}

}  // namespace ldplab::cli
