// Copyright 2026 The ldplab Authors
// SPDX-License-Identifier: Apache-2.0
#include "ldplab/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "json.hpp"
#include "ldplab/cli/output.hpp"
#include "ldplab/costs.hpp"
#include "ldplab/errors.hpp"
#include "ldplab/lemmas.hpp"

namespace fs = std::filesystem;

namespace ldplab::cli {

namespace {

constexpr char const* kManifest = "manifest.json";
constexpr char const* kConfigCopy = "config.yaml";
constexpr char const* kTrajSummary = "trajsummary.csv";

std::string certified_line(ExperimentConfig const& cfg)
{
    std::string s;
    for (auto const& [k, v] : certified_constants(cfg))
    {
        if (!s.empty())
            s += ' ';
        s += k + "=" + format_number(v);
    }
    return s;
}

bool wants(ExperimentConfig const& cfg, char const* format)
{
    auto const& f = cfg.output.formats;
    return std::find(f.begin(), f.end(), format) != f.end();
}

double parse_double(std::string const& s, char const* what)
{
    try
    {
        std::size_t pos = 0;
        double const v = std::stod(s, &pos);
        if (pos != s.size())
            throw std::invalid_argument(s);
        return v;
    }
    catch (std::exception const&)
    {
        throw std::invalid_argument(fmt::format("cannot read {} from '{}'", what, s));
    }
}

std::int64_t parse_int(std::string const& s, char const* what)
{
    try
    {
        std::size_t pos = 0;
        auto const v = std::stoll(s, &pos);
        if (pos != s.size())
            throw std::invalid_argument(s);
        return v;
    }
    catch (std::exception const&)
    {
        throw std::invalid_argument(fmt::format("cannot read {} from '{}'", what, s));
    }
}

ExperimentConfig load_results_config(fs::path const& dir)
{
    auto const path = dir / kConfigCopy;
    if (!fs::exists(path))
        throw IoError(fmt::format("'{}' holds no simulation results (missing {})", dir.string(),
                                  kConfigCopy));
    return parse_config(read_file(path), path.string());
}

std::vector<std::int64_t> default_t_grid(ExperimentConfig const& cfg)
{
    if (!cfg.ensemble.t_grid.empty())
        return cfg.ensemble.t_grid;
    std::vector<std::int64_t> g;
    for (std::int64_t t = 1; t <= cfg.ensemble.T; ++t)
        g.push_back(t);
    return g;
}

std::vector<std::int64_t> default_curve_grid()
{
    std::vector<std::int64_t> g{3};
    for (std::int64_t t = 10; t <= 1'000'000'000; t *= 10)
    {
        g.push_back(t);
        if (t < 1'000'000'000)
            g.push_back(3 * t);
    }
    return g;
}

}  // namespace

//---------------------------------------------------------------------------//
// Option resolution
//---------------------------------------------------------------------------//

ExperimentConfig resolve_config(GlobalOptions const& opts)
{
    if (opts.config_path && opts.preset)
        throw ConfigError("<command line>", 0, 0, "pass either --config or --preset, not both");
    if (!opts.config_path && !opts.preset)
        throw ConfigError("<command line>", 0, 0, "one of --config or --preset is required");
    ExperimentConfig cfg = opts.config_path ? load_config(*opts.config_path) : preset(*opts.preset);
    if (opts.seed)
        cfg.ensemble.seed = *opts.seed;
    if (opts.runs)
        cfg.ensemble.N = *opts.runs;
    validate_config(cfg);
    return cfg;
}

fs::path resolve_output_dir(GlobalOptions const& opts, ExperimentConfig const* config)
{
    if (opts.out)
        return *opts.out;
    if (char const* env = std::getenv("LDPLAB_OUT"); env && *env)
        return env;
    if (config)
        return config->output.directory;
    throw ConfigError("<command line>", 0, 0,
                      "no results directory: pass --out, set LDPLAB_OUT, or give --config/--preset");
}

fs::path resolve_results_dir(GlobalOptions const& opts)
{
    if (opts.config_path || opts.preset)
    {
        auto const cfg = resolve_config(opts);
        return resolve_output_dir(opts, &cfg);
    }
    return resolve_output_dir(opts, nullptr);
}

int guarded(std::function<int()> const& body, std::ostream& err)
{
    try
    {
        return body();
    }
    catch (ConfigError const& e)
    {
        fmt::print(err, "config error: {}\n", e.what());
        return kExitConfig;
    }
    catch (IoError const& e)
    {
        fmt::print(err, "io error: {}\n", e.what());
        return kExitIo;
    }
    catch (InsufficientData const& e)
    {
        fmt::print(err, "insufficient data: {}\n", e.what());
        return kExitInsufficientData;
    }
    catch (PreconditionViolation const& e)
    {
        fmt::print(err, "precondition violated: {}\n", e.what());
        return kExitVerification;
    }
    catch (std::invalid_argument const& e)
    {
        fmt::print(err, "invalid argument: {}\n", e.what());
        return kExitConfig;
    }
    catch (fs::filesystem_error const& e)
    {
        fmt::print(err, "io error: {}\n", e.what());
        return kExitIo;
    }
}

//---------------------------------------------------------------------------//
// CSV schemas
//---------------------------------------------------------------------------//

std::string trajsummary_csv(ExperimentConfig const& cfg, EnsembleSummary const& s)
{
    CsvHeader header{s.config_digest,
                     {{"N", std::to_string(s.num_runs)},
                      {"T", std::to_string(s.horizon)},
                      {"seed", std::to_string(cfg.ensemble.seed)},
                      {"method", cfg.method.name},
                      {"certified", certified_line(cfg)}}};
    std::vector<std::string> cols{"run_index", "diverged", "clip_events"};
    for (double e : s.epsilon_grid)
        cols.push_back("hit_" + format_number(e));
    CsvWriter w(header, cols);
    std::size_t const k = s.epsilon_grid.size();
    std::vector<std::string> cells(cols.size());
    for (std::int64_t r = 0; r < s.num_runs; ++r)
    {
        auto const u = static_cast<std::size_t>(r);
        cells[0] = std::to_string(r);
        cells[1] = s.diverged[u] ? "1" : "0";
        cells[2] = std::to_string(s.clip_events[u]);
        for (std::size_t j = 0; j < k; ++j)
            cells[3 + j] = std::to_string(s.hit(r, j));
        w.row(cells);
    }
    return w.str();
}

EnsembleSummary read_trajsummary(std::string const& text, ExperimentConfig const& cfg)
{
    auto const t = parse_csv(text);
    EnsembleSummary s;
    s.config_digest = t.comment("config_digest");
    s.epsilon_grid = cfg.ensemble.epsilon_grid;
    s.horizon = cfg.ensemble.T;
    s.num_runs = static_cast<std::int64_t>(t.rows.size());
    std::size_t const k = s.epsilon_grid.size();
    std::vector<std::size_t> hit_cols;
    for (double e : s.epsilon_grid)
        hit_cols.push_back(t.column("hit_" + format_number(e)));
    auto const c_div = t.column("diverged");
    auto const c_clip = t.column("clip_events");
    s.hitting_time.reserve(t.rows.size() * k);
    for (auto const& row : t.rows)
    {
        s.diverged.push_back(row[c_div] == "1" ? 1 : 0);
        s.clip_events.push_back(parse_int(row[c_clip], "clip_events"));
        for (auto c : hit_cols)
            s.hitting_time.push_back(parse_int(row[c], "hitting time"));
    }
    s.iterate_digest.assign(t.rows.size(), 0);
    s.final_min.assign(t.rows.size(), 0.0);
    s.final_avg.assign(t.rows.size(), 0.0);
    return s;
}

std::string tail_csv(TailEstimate const& tail)
{
    CsvWriter w({tail.config_digest, {{"diverged_runs", std::to_string(tail.diverged_count)}}},
                {"t", "epsilon", "N", "exceed", "p_hat", "ci_low", "ci_high"});
    for (std::size_t i = 0; i < tail.t_grid.size(); ++i)
        w.row({std::to_string(tail.t_grid[i]), format_number(tail.epsilon),
               std::to_string(tail.num_runs), std::to_string(tail.exceed_count[i]),
               format_number(tail.p_hat[i]), format_number(tail.ci_low[i]),
               format_number(tail.ci_high[i])});
    return w.str();
}

TailEstimate read_tail_csv(std::string const& text)
{
    auto const t = parse_csv(text);
    TailEstimate e;
    e.config_digest = t.comment("config_digest");
    auto const dv = t.comment("diverged_runs");
    e.diverged_count = dv.empty() ? 0 : parse_int(dv, "diverged_runs");
    auto const ct = t.column("t"), ce = t.column("epsilon"), cn = t.column("N"),
               cx = t.column("exceed"), cp = t.column("p_hat"), cl = t.column("ci_low"),
               ch = t.column("ci_high");
    for (auto const& row : t.rows)
    {
        e.t_grid.push_back(parse_int(row[ct], "t"));
        e.epsilon = parse_double(row[ce], "epsilon");
        e.num_runs = parse_int(row[cn], "N");
        e.exceed_count.push_back(parse_int(row[cx], "exceed"));
        e.p_hat.push_back(parse_double(row[cp], "p_hat"));
        e.ci_low.push_back(parse_double(row[cl], "ci_low"));
        e.ci_high.push_back(parse_double(row[ch], "ci_high"));
    }
    return e;
}

//---------------------------------------------------------------------------//
// simulate
//---------------------------------------------------------------------------//

int cmd_simulate(GlobalOptions const& opts, std::ostream& log)
{
    auto const cfg = resolve_config(opts);
    auto const digest = config_digest(cfg);
    auto const dir = resolve_output_dir(opts, &cfg);

    auto const manifest_path = dir / kManifest;
    if (fs::exists(manifest_path) && !opts.force)
    {
        std::string existing;
        try
        {
            existing = nlohmann::json::parse(read_file(manifest_path)).value("config_digest", "");
        }
        catch (nlohmann::json::exception const&)
        {
            existing = "<unreadable>";
        }
        if (existing != digest)
            throw DigestConflict(fmt::format(
                "'{}' holds results for config {} but this config is {}; use --force to overwrite",
                dir.string(), existing, digest));
    }

    auto const rc = build_run_config(cfg);
    auto summary = run_ensemble(rc, cfg.ensemble.N, opts.workers);
    summary.config_digest = digest;

    nlohmann::ordered_json m;
    m["tool"] = kToolName;
    m["version"] = kToolVersion;
    m["config_digest"] = digest;
    m["config"] = nlohmann::ordered_json::parse(canonical_json(cfg));
    nlohmann::ordered_json cert = nlohmann::ordered_json::object();
    for (auto const& [k, v] : certified_constants(cfg))
        cert[k] = v;
    m["certified"] = cert;
    m["N"] = summary.num_runs;
    m["T"] = summary.horizon;
    m["seed"] = cfg.ensemble.seed;
    m["diverged_runs"] = summary.diverged_count();
    m["clip_events"] = summary.total_clip_events();
    m["files"] = {kTrajSummary, kConfigCopy};

    write_file(dir / kConfigCopy, to_yaml(cfg));
    write_file(dir / kTrajSummary, trajsummary_csv(cfg, summary));
    write_file(manifest_path, m.dump(2) + "\n");

    fmt::print(log, "simulated {} runs x T={} (config {}) into {}\n", summary.num_runs,
               summary.horizon, digest, dir.string());
    fmt::print(log, "diverged runs: {}, clip events: {}\n", summary.diverged_count(),
               summary.total_clip_events());
    return kExitOk;
}

//---------------------------------------------------------------------------//
// tail
//---------------------------------------------------------------------------//

namespace {

struct Overlay
{
    std::string label;
    DecaySequence decay;
    double slope = 0.0;  ///< d log p / d n_t
};

std::vector<Overlay> overlays_for(ExperimentConfig const& cfg, double epsilon)
{
    std::vector<Overlay> out;
    if (auto r = theory_rate(cfg))
        out.push_back({"theory " + r->name, r->decay, -r->rate(epsilon)});
    for (auto const& o : cfg.analysis.sota)
    {
        auto const c = sota_curve(sota_kind_from_string(o.kind), o.params);
        out.push_back({std::string(to_string(c.kind)), c.decay, c.slope(epsilon)});
    }
    return out;
}

std::string tail_svg(TailEstimate const& tail, ExperimentConfig const& cfg)
{
    SvgChart chart(fmt::format("P(F_t > {})", format_number(tail.epsilon)), "t", "probability", true);
    chart.add_note(fmt::format("{} {}  config {}  N={}", kToolName, kToolVersion, tail.config_digest,
                               tail.num_runs));
    std::vector<double> ts(tail.t_grid.begin(), tail.t_grid.end());
    chart.add_band({ts, tail.ci_low, tail.ci_high, "#1f77b4"});
    chart.add_series({"p_hat", ts, tail.p_hat, "#1f77b4", false});

    // Reference curves pinned to the first estimable point with t >= 3.
    std::size_t anchor = tail.t_grid.size();
    for (std::size_t i = 0; i < tail.t_grid.size(); ++i)
        if (tail.t_grid[i] >= 3 && tail.p_hat[i] > 0.0)
        {
            anchor = i;
            break;
        }
    if (anchor < tail.t_grid.size())
    {
        static constexpr char const* kColors[] = {"#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
        std::size_t ci = 0;
        for (auto const& o : overlays_for(cfg, tail.epsilon))
        {
            double const n0 = o.decay(static_cast<double>(tail.t_grid[anchor]));
            SvgSeries s{o.label, {}, {}, kColors[ci++ % 4], true};
            for (std::size_t i = anchor; i < tail.t_grid.size(); ++i)
            {
                double const t = static_cast<double>(tail.t_grid[i]);
                s.x.push_back(t);
                s.y.push_back(tail.p_hat[anchor] * std::exp(o.slope * (o.decay(t) - n0)));
            }
            chart.add_series(std::move(s));
        }
    }
    return chart.render();
}

}  // namespace

int cmd_tail(GlobalOptions const& opts, TailOptions const& topts, std::ostream& log)
{
    auto const dir = resolve_results_dir(opts);
    auto const cfg = load_results_config(dir);
    auto const summary = read_trajsummary(read_file(dir / kTrajSummary), cfg);
    double const eps = topts.epsilon.value_or(cfg.ensemble.epsilon_grid.front());
    auto const grid = topts.t_grid.empty() ? default_t_grid(cfg) : topts.t_grid;
    auto const tail = estimate_tail(summary, eps, grid);

    write_file(dir / "tail.csv", tail_csv(tail));
    if (wants(cfg, "svg"))
        write_file(dir / "tail.svg", tail_svg(tail, cfg));
    fmt::print(log, "t        exceed    p_hat         95% CI\n");
    for (std::size_t i = 0; i < tail.t_grid.size(); ++i)
        fmt::print(log, "{:<8} {:<9} {:<13.6g} [{:.6g}, {:.6g}]\n", tail.t_grid[i],
                   tail.exceed_count[i], tail.p_hat[i], tail.ci_low[i], tail.ci_high[i]);
    fmt::print(log, "wrote {}\n", (dir / "tail.csv").string());
    return kExitOk;
}

//---------------------------------------------------------------------------//
// fit
//---------------------------------------------------------------------------//

int cmd_fit(GlobalOptions const& opts, FitOptions const& fopts, std::ostream& log)
{
    fs::path tail_path;
    std::optional<ExperimentConfig> cfg;
    if (fopts.tail_csv)
    {
        tail_path = *fopts.tail_csv;
    }
    else
    {
        auto const dir = resolve_results_dir(opts);
        tail_path = dir / "tail.csv";
    }
    if (fs::exists(tail_path.parent_path() / kConfigCopy))
        cfg = load_results_config(tail_path.parent_path());
    auto const tail = read_tail_csv(read_file(tail_path));

    std::vector<std::string> names = fopts.candidates;
    if (names.empty() && cfg)
        names = cfg->analysis.candidates;
    if (names.empty())
        names = {"sqrt", "sqrt-over-log", "t-over-log", "tbeta-over-log", "t-over-log2", "linear"};
    double const p = fopts.candidate_p.value_or(cfg ? cfg->analysis.candidate_p : 2.0);
    std::vector<DecaySequence> decays;
    for (auto const& n : names)
        decays.push_back({decay_family_from_string(n), p});

    auto const fits = fit_decay(tail, decays, names);
    CsvWriter w({tail.config_digest, {{"epsilon", format_number(tail.epsilon)}}},
                {"candidate", "slope_hat", "intercept", "r_squared", "points_used"});
    for (auto const& f : fits)
    {
        w.row({f.candidate, format_number(f.slope_hat), format_number(f.intercept),
               format_number(f.r_squared), std::to_string(f.points_used)});
        fmt::print(log, "{:<24} slope {:<12.6g} R^2 {:.6f} ({} points)\n", f.candidate, f.slope_hat,
                   f.r_squared, f.points_used);
    }
    auto const out = tail_path.parent_path() / "fit.csv";
    write_file(out, w.str());
    fmt::print(log, "wrote {}\n", out.string());
    return kExitOk;
}

//---------------------------------------------------------------------------//
// verify
//---------------------------------------------------------------------------//

double rate_transform_error(RateSpec const& rate)
{
    double const c = rate.phi_coefficient;
    double const lambda_max = 10.0 / (2.0 * c);
    double const h = std::min(1e-4, lambda_max / 2000.0);
    std::vector<double> lambdas;
    for (double l = -20.0 * h; l <= 1.1 * lambda_max; l += h)
        lambdas.push_back(l);
    std::vector<double> xs;
    for (int i = 0; i <= 100; ++i)
        xs.push_back(0.1 * i);
    auto const num = fenchel_legendre([&](double l) { return rate.phi(l); }, xs, lambdas);
    double worst = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i)
    {
        double const exact = rate.rate(xs[i]);
        double const err = exact > 0.0 ? std::abs(num[i] - exact) / exact : std::abs(num[i]);
        worst = std::max(worst, err);
    }
    return worst;
}

std::vector<std::string> verify_suite_names()
{
    return {"schedules", "appendix-f-enum", "rates",        "mgf-bounded",
            "mgf-inner", "clip-bias",       "clip-subgauss", "batch-bound"};
}

namespace {

VerifyRow row_from(std::string const& suite, LemmaCheck const& c)
{
    return {suite, c.label, c.empirical, c.bound, c.standard_error, c.slack, c.violations, c.pass};
}

VerifyRow exact_row(std::string suite, std::string check, double got, double want, double tol)
{
    double const err = std::abs(got - want);
    return {std::move(suite), std::move(check), got, want, 0.0, tol - err, 0, err <= tol};
}

std::vector<VerifyRow> schedules_suite()
{
    std::string const s = "schedules";
    std::vector<VerifyRow> rows{
        exact_row(s, "sgd-sqrt a=1 t=1", step_size(ScheduleSpec::sgd_sqrt(1.0), 1),
                  0.70710678118654752, 1e-12),
        exact_row(s, "csgd-power p=2 t=3", step_size(ScheduleSpec::csgd_power(2.0), 3), 0.5, 1e-12),
        exact_row(s, "csgd-power p=1.5 t=1", step_size(ScheduleSpec::csgd_power(1.5), 1),
                  0.659753955386447, 1e-12),
        exact_row(s, "paper-eq5 p=2 G=1 t=1", clip_threshold(ClipSpec::paper_eq5(2.0, 1.0), 1),
                  1.66510922231539551, 1e-12),
        exact_row(s, "paper-eq5 p=1.5 G=1 t=1", clip_threshold(ClipSpec::paper_eq5(1.5, 1.0), 1),
                  2.14354692507258633, 1e-12),
        exact_row(s, "general-C C=4 p=2 t=e^2-1",
                  clip_threshold_real(ClipSpec::general(2.0, 4.0), std::exp(2.0) - 1.0),
                  5.65685424949238019, 1e-12),
    };
    // a = 1.01 / L must be rejected for the Huber cost (L = 2).
    RunConfig rc;
    rc.oracle = std::make_shared<Oracle const>(Oracle::noiseless(huber_cost(1.0, 2)));
    rc.init_x1 = {0.48, 0.64};
    rc.horizon = 10;
    rc.step = ScheduleSpec::sgd_sqrt(1.01 / 2.0);
    bool rejected = false;
    try
    {
        rc.validate();
    }
    catch (std::invalid_argument const&)
    {
        rejected = true;
    }
    rows.push_back({s, "a = 1.01/L rejected", rejected ? 1.0 : 0.0, 1.0, 0.0, 0.0, rejected ? 0 : 1,
                    rejected});
    return rows;
}

std::vector<VerifyRow> enum_suite()
{
    std::vector<VerifyRow> rows;
    for (auto const& r : appendix_f_enumeration(20))
        rows.push_back({"appendix-f-enum", fmt::format("t={} numerator={}/2^{}", r.t, r.numerator, r.t - 1),
                        r.probability, lower_bound_exact_prob(r.t), 0.0, 0.0,
                        r.matches_closed_form ? 0 : 1, r.matches_closed_form});
    return rows;
}

std::vector<VerifyRow> rates_suite()
{
    std::vector<std::pair<std::string, RateSpec>> rates{
        {"sgd M=1 G=1", rate_sgd(1.0, 1.0)},
        {"sgd M=2 G=3", rate_sgd(2.0, 3.0)},
        {"csgd G=1 p=1.5", rate_csgd(1.0, 1.5)},
        {"csgd G=1 p=2", rate_csgd(1.0, 2.0)},
        {"csgd-general G=1 C=4 p=1.5", rate_csgd_general(1.0, 4.0, 1.5)},
        {"csgd-general G=1 C=4 p=2", rate_csgd_general(1.0, 4.0, 2.0)},
    };
    std::vector<VerifyRow> rows;
    for (auto const& [label, r] : rates)
    {
        double const err = rate_transform_error(r);
        rows.push_back({"rates", label + " max rel err", err, 1e-3, 0.0, 1e-3 - err, 0, err <= 1e-3});
    }
    return rows;
}

std::shared_ptr<Oracle const> additive(CostSpec cost, NoiseModel noise)
{
    return std::make_shared<Oracle const>(Oracle::additive(std::move(cost), std::move(noise)));
}

std::vector<VerifyRow> lemma_suite(std::string const& name, std::size_t samples, std::uint64_t seed)
{
    auto const suite = lemma_suite_from_string(name);
    std::vector<VerifyRow> rows;
    auto run = [&](std::string const& tag, LemmaParams params) {
        params.num_samples = samples;
        params.seed = seed;
        auto const rep = verify_lemma_suite(suite, params);
        for (auto const& c : rep.checks)
        {
            auto r = row_from(name, c);
            r.check = tag + " " + r.check;
            rows.push_back(std::move(r));
        }
    };

    switch (suite)
    {
        case LemmaSuite::MgfBounded:
        case LemmaSuite::MgfInner: {
            LemmaParams p;
            p.oracle = additive(huber_cost(1.0, 2), NoiseModel::two_point({0.48, 0.64}));
            run("two-point |v|=0.8", p);
            p.oracle = additive(huber_cost(1.0, 2), NoiseModel::sphere(2, 1.0));
            run("sphere d=2 r=1", p);
            p.oracle = additive(huber_cost(1.0, 5), NoiseModel::sphere(5, 2.0));
            run("sphere d=5 r=2", p);
            break;
        }
        case LemmaSuite::ClipBias:
        case LemmaSuite::ClipSubgauss: {
            auto const cost = pseudo_huber_cost(1.0, 2);
            for (double pm : {1.2, 1.5, 2.0})
            {
                LemmaParams p;
                p.oracle = additive(cost, NoiseModel::pareto(2, 1.0, 3.0, pm));
                p.p = pm;
                p.gammas = {4.0, 16.0, 64.0};
                for (Vec x : {Vec{0.0, 0.0}, Vec{0.5, -0.5}})
                {
                    p.x = x;
                    run(fmt::format("pareto a=3 x=({},{})", x[0], x[1]), p);
                }
                // Heavier tail: infinite variance whenever p < 2.
                p.oracle = additive(cost, NoiseModel::pareto(2, 1.0, pm + 0.5, pm));
                p.x = {0.5, -0.5};
                run(fmt::format("pareto a={} x=(0.5,-0.5)", pm + 0.5), p);
            }
            // General-C thresholds past their burn-in.
            LemmaParams g;
            g.x = {0.5, -0.5};
            g.p = 1.5;
            g.oracle = additive(cost, NoiseModel::pareto(2, 1.0, 3.0, 1.5));
            g.general_C = 1.0;
            g.t = 40000;
            run("general-C C=1 t=40000", g);
            g.p = 2.0;
            g.oracle = additive(cost, NoiseModel::pareto(2, 1.0, 3.0, 2.0));
            g.general_C = 2.0;
            g.t = 10;
            run("general-C C=2 t=10", g);
            break;
        }
        case LemmaSuite::BatchBound: {
            CostBlock b;
            b.name = "logistic";
            b.dim = 3;
            b.samples = 200;
            ExperimentConfig c;
            c.cost = b;
            c.oracle.mode = "batch";
            c.oracle.batch_size = 10;
            c.method.x1 = {0.3, -0.2, 0.1};
            c.ensemble.epsilon_grid = {0.1};
            LemmaParams p;
            p.oracle = build_run_config(c).oracle;
            p.x = c.method.x1;
            run("logistic m=200 b=10", p);
            break;
        }
    }
    return rows;
}

}  // namespace

std::vector<VerifyRow> run_verify_suite(std::string const& name, std::size_t samples,
                                        std::uint64_t seed)
{
    if (name == "schedules")
        return schedules_suite();
    if (name == "appendix-f-enum")
        return enum_suite();
    if (name == "rates")
        return rates_suite();
    return lemma_suite(name, samples, seed);
}

int cmd_verify(GlobalOptions const& opts, VerifyOptions const& vopts, std::ostream& log)
{
    std::vector<std::string> names;
    if (vopts.suite == "all")
        names = verify_suite_names();
    else
        names = {vopts.suite};
    for (auto const& n : names)
    {
        auto const all = verify_suite_names();
        if (std::find(all.begin(), all.end(), n) == all.end())
            throw std::invalid_argument(fmt::format("unknown verify suite '{}'", n));
    }

    CsvWriter w({"none", {{"samples", std::to_string(vopts.samples)}}},
                {"suite", "check", "empirical", "bound", "standard_error", "slack", "violations",
                 "pass"});
    bool all_pass = true;
    for (auto const& n : names)
    {
        auto const rows = run_verify_suite(n, vopts.samples, vopts.seed);
        bool suite_pass = true;
        for (auto const& r : rows)
        {
            suite_pass = suite_pass && r.pass;
            fmt::print(log, "  {:<4} {:<56} {:>14.8g} <= {:<14.8g} slack {:.3g}\n",
                       r.pass ? "ok" : "FAIL", r.check, r.empirical, r.bound, r.slack);
            w.row({r.suite, r.check, format_number(r.empirical), format_number(r.bound),
                   format_number(r.standard_error), format_number(r.slack),
                   std::to_string(r.violations), r.pass ? "true" : "false"});
        }
        fmt::print(log, "{}: {}\n", n, suite_pass ? "PASS" : "FAIL");
        all_pass = all_pass && suite_pass;
    }

    GlobalOptions o = opts;
    fs::path dir;
    if (o.out || std::getenv("LDPLAB_OUT"))
        dir = resolve_output_dir(o, nullptr);
    else
        dir = "results/verify";
    write_file(dir / "verify.csv", w.str());
    fmt::print(log, "wrote {}\n", (dir / "verify.csv").string());
    return all_pass ? kExitOk : kExitVerification;
}

//---------------------------------------------------------------------------//
// rates / compare-sota
//---------------------------------------------------------------------------//

namespace {

struct Curve
{
    std::string family;
    DecaySequence decay;
    double slope;
};

int write_curves(std::vector<Curve> const& curves, std::vector<std::int64_t> const& grid,
                 fs::path const& dir, std::string const& stem, std::string const& digest,
                 double epsilon, std::ostream& log)
{
    CsvWriter w({digest, {{"epsilon", format_number(epsilon)}}}, {"t", "n_t", "family", "slope"});
    SvgChart chart(fmt::format("decay rates n_t ({})", stem), "log10 t", "n_t", true);
    chart.add_note(fmt::format("{} {}  config {}", kToolName, kToolVersion, digest));
    static constexpr char const* kColors[] = {"#1f77b4", "#d62728", "#2ca02c",
                                              "#9467bd", "#ff7f0e", "#8c564b"};
    std::size_t ci = 0;
    for (auto const& c : curves)
    {
        SvgSeries s{c.family, {}, {}, kColors[ci % 6], ci % 2 == 1};
        ++ci;
        for (auto t : grid)
        {
            double const n = c.decay(static_cast<double>(t));
            w.row({std::to_string(t), format_number(n), c.family, format_number(c.slope)});
            s.x.push_back(std::log10(static_cast<double>(t)));
            s.y.push_back(n);
        }
        chart.add_series(std::move(s));
    }
    write_file(dir / (stem + ".csv"), w.str());
    write_file(dir / (stem + ".svg"), chart.render());
    fmt::print(log, "wrote {}\n", (dir / (stem + ".csv")).string());
    return kExitOk;
}

std::vector<std::int64_t> checked_grid(std::vector<std::int64_t> grid)
{
    if (grid.empty())
        grid = default_curve_grid();
    for (auto t : grid)
        if (t < 3)
            throw std::invalid_argument("decay rates are only evaluated for t >= 3");
    return grid;
}

}  // namespace

int cmd_rates(GlobalOptions const& opts, CurveOptions const& copts, std::ostream& log)
{
    auto const grid = checked_grid(copts.t_grid);
    std::vector<Curve> curves;
    std::string digest = "none";
    fs::path dir = "results/rates";
    if (opts.config_path || opts.preset)
    {
        auto const cfg = resolve_config(opts);
        digest = config_digest(cfg);
        dir = resolve_output_dir(opts, &cfg);
        auto const r = theory_rate(cfg);
        if (!r)
            throw std::invalid_argument("the configured method has no closed-form rate function");
        curves.push_back({r->name, r->decay, -r->rate(copts.epsilon)});
    }
    else
    {
        if (opts.out || std::getenv("LDPLAB_OUT"))
            dir = resolve_output_dir(opts, nullptr);
        for (auto const& r : {rate_sgd(1.0, 1.0), rate_csgd(1.0, 1.5), rate_csgd(1.0, 2.0)})
            curves.push_back({r.decay.label(), r.decay, -r.rate(copts.epsilon)});
    }
    return write_curves(curves, grid, dir, "rates", digest, copts.epsilon, log);
}

int cmd_compare_sota(GlobalOptions const& opts, CurveOptions const& copts, std::ostream& log)
{
    auto grid = copts.t_grid;
    if (grid.empty())
        for (std::int64_t t = 1000; t <= 1'000'000'000; t *= 10)
            grid.push_back(t);
    grid = checked_grid(grid);

    double p = 1.5;
    SotaParams params{.B = 1.0, .sigma = 1.0, .delta = 1.0, .L = 1.0, .C = 1.0, .p = 1.5};
    std::string digest = "none";
    fs::path dir = "results/compare-sota";
    if (opts.config_path || opts.preset)
    {
        auto const cfg = resolve_config(opts);
        digest = config_digest(cfg);
        dir = resolve_output_dir(opts, &cfg);
        p = cfg.analysis.candidate_p < 2.0 ? cfg.analysis.candidate_p : 1.5;
        params.p = p;
        for (auto const& o : cfg.analysis.sota)
        {
            auto const& q = o.params;
            if (q.B) params.B = q.B;
            if (q.sigma) params.sigma = q.sigma;
            if (q.delta) params.delta = q.delta;
            if (q.L) params.L = q.L;
            if (q.C) params.C = q.C;
        }
    }
    else if (opts.out || std::getenv("LDPLAB_OUT"))
    {
        dir = resolve_output_dir(opts, nullptr);
    }

    double const eps = copts.epsilon;
    auto const sgd = rate_sgd(1.0, 1.0);
    auto const csgd = rate_csgd(1.0, p);
    auto const csgd2 = rate_csgd(1.0, 2.0);
    auto const liu = sota_curve(SotaKind::LiuSgd, params);
    auto const nguyen = sota_curve(SotaKind::NguyenCsgd, params);
    auto const armacki = sota_curve(SotaKind::ArmackiNsgd, params);

    std::vector<std::pair<Curve, Curve>> pairs{
        {{"sgd " + sgd.decay.label(), sgd.decay, -sgd.rate(eps)},
         {"liu-sgd " + liu.decay.label(), liu.decay, liu.slope(eps)}},
        {{"csgd " + csgd.decay.label(), csgd.decay, -csgd.rate(eps)},
         {"nguyen-csgd " + nguyen.decay.label(), nguyen.decay, nguyen.slope(eps)}},
        {{"csgd-p2 " + csgd2.decay.label(), csgd2.decay, -csgd2.rate(eps)},
         {"armacki-nsgd " + armacki.decay.label(), armacki.decay, armacki.slope(eps)}},
    };
    std::vector<Curve> curves;
    bool dominates = true;
    for (auto const& [ours, theirs] : pairs)
    {
        curves.push_back(ours);
        curves.push_back(theirs);
        bool ok = true;
        for (auto t : grid)
            ok = ok && ours.decay(static_cast<double>(t)) > theirs.decay(static_cast<double>(t));
        fmt::print(log, "{:<36} vs {:<40} {}\n", ours.family, theirs.family,
                   ok ? "dominates on the grid" : "does NOT dominate on the grid");
        dominates = dominates && ok;
    }
    write_curves(curves, grid, dir, "compare_sota", digest, eps, log);
    return dominates ? kExitOk : kExitVerification;
}

//---------------------------------------------------------------------------//
// report
//---------------------------------------------------------------------------//

int cmd_report(GlobalOptions const& opts, std::ostream& log)
{
    auto const dir = resolve_results_dir(opts);
    auto const cfg = load_results_config(dir);
    auto const summary = read_trajsummary(read_file(dir / kTrajSummary), cfg);
    auto const grid = default_t_grid(cfg);
    auto const digest = config_digest(cfg);

    std::string md;
    md += fmt::format("# ldplab report\n\n- tool: {} {}\n- config digest: {}\n- runs: {}\n- horizon T: {}\n",
                      kToolName, kToolVersion, digest, summary.num_runs, summary.horizon);
    md += fmt::format("- method: {}\n- diverged runs: {}\n- clip events: {}\n", cfg.method.name,
                      summary.diverged_count(), summary.total_clip_events());
    md += fmt::format("- certified: {}\n", certified_line(cfg));
    if (auto r = theory_rate(cfg))
        md += fmt::format("- theory rate: {} with n_t = {} and I(x) = {} x^2\n", r->name,
                          r->decay.label(), format_number(r->rate_coefficient));

    SvgChart chart("P(F_t > eps) for every simulated eps", "t", "probability", true);
    chart.add_note(fmt::format("{} {}  config {}  N={}", kToolName, kToolVersion, digest,
                               summary.num_runs));
    static constexpr char const* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

    std::size_t k = 0;
    for (double eps : cfg.ensemble.epsilon_grid)
    {
        auto tail = estimate_tail(summary, eps, grid);
        tail.config_digest = digest;
        write_file(dir / fmt::format("tail_eps{}.csv", k), tail_csv(tail));
        md += fmt::format("\n## eps = {}\n\n| t | exceed | p_hat | ci_low | ci_high |\n|---|---|---|---|---|\n",
                          format_number(eps));
        for (std::size_t i = 0; i < tail.t_grid.size(); ++i)
            md += fmt::format("| {} | {} | {:.6g} | {:.6g} | {:.6g} |\n", tail.t_grid[i],
                              tail.exceed_count[i], tail.p_hat[i], tail.ci_low[i], tail.ci_high[i]);
        if (!cfg.analysis.candidates.empty())
        {
            std::vector<DecaySequence> decays;
            for (auto const& n : cfg.analysis.candidates)
                decays.push_back({decay_family_from_string(n), cfg.analysis.candidate_p});
            try
            {
                auto const fits = fit_decay(tail, decays, cfg.analysis.candidates);
                md += "\n| candidate | slope_hat | r_squared | points |\n|---|---|---|---|\n";
                for (auto const& f : fits)
                    md += fmt::format("| {} | {:.6g} | {:.6f} | {} |\n", f.candidate, f.slope_hat,
                                      f.r_squared, f.points_used);
            }
            catch (InsufficientData const& e)
            {
                md += fmt::format("\nNo decay fit: {}\n", e.what());
            }
        }
        std::vector<double> ts(tail.t_grid.begin(), tail.t_grid.end());
        chart.add_series({"eps=" + format_number(eps), ts, tail.p_hat, kColors[k % 5], false});
        ++k;
    }
    write_file(dir / "report.md", md);
    if (wants(cfg, "svg"))
        write_file(dir / "report.svg", chart.render());
    fmt::print(log, "wrote {}\n", (dir / "report.md").string());
    return kExitOk;
}

}  // namespace ldplab::cli
