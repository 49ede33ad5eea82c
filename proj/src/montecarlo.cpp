// Copyright 2026 The ldplab Authors
// SPDX-License-Identifier: Apache-2.0
#include "ldplab/montecarlo.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>

#include "ldplab/errors.hpp"

namespace ldplab {

void parallel_for(std::int64_t n, unsigned workers, std::function<void(std::int64_t)> const& fn)
{
    if (n <= 0)
        return;
    if (workers == 0)
        workers = std::max(1u, std::thread::hardware_concurrency());
    auto const nw = static_cast<std::int64_t>(std::min<std::int64_t>(workers, n));
    if (nw == 1)
    {
        for (std::int64_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(nw));
    threads.reserve(static_cast<std::size_t>(nw));
    for (std::int64_t w = 0; w < nw; ++w)
    {
        std::int64_t const begin = n * w / nw;
        std::int64_t const end = n * (w + 1) / nw;
        threads.emplace_back([&, w, begin, end] {
            try
            {
                for (std::int64_t i = begin; i < end; ++i)
                    fn(i);
            }
            catch (...)
            {
                errors[static_cast<std::size_t>(w)] = std::current_exception();
            }
        });
    }
    for (auto& th : threads)
        th.join();
    for (auto const& e : errors)
        if (e)
            std::rethrow_exception(e);
}

std::int64_t EnsembleSummary::total_clip_events() const
{
    std::int64_t total = 0;
    for (auto c : clip_events)
        total += c;
    return total;
}

std::int64_t EnsembleSummary::diverged_count() const
{
    return std::count(diverged.begin(), diverged.end(), std::uint8_t{1});
}

EnsembleSummary run_ensemble(RunConfig const& config, std::int64_t num_runs, unsigned workers)
{
    if (num_runs < 1)
        throw std::invalid_argument("ensemble size N must be >= 1");
    config.validate();

    EnsembleSummary s;
    s.epsilon_grid = config.epsilon_grid;
    s.horizon = config.horizon;
    s.num_runs = num_runs;
    auto const n = static_cast<std::size_t>(num_runs);
    std::size_t const k = config.epsilon_grid.size();
    s.hitting_time.assign(n * k, kNever);
    s.diverged.assign(n, 0);
    s.clip_events.assign(n, 0);
    s.iterate_digest.assign(n, 0);
    s.final_min.assign(n, 0.0);
    s.final_avg.assign(n, 0.0);

    parallel_for(num_runs, workers, [&](std::int64_t i) {
        auto const rec = run_trajectory(config, i, RecordMode::Lean);
        auto const u = static_cast<std::size_t>(i);
        std::copy(rec.hitting_time.begin(), rec.hitting_time.end(),
                  s.hitting_time.begin() + static_cast<std::ptrdiff_t>(u * k));
        s.diverged[u] = rec.diverged ? 1 : 0;
        s.clip_events[u] = rec.clip_events;
        s.iterate_digest[u] = rec.iterate_digest;
        s.final_min[u] = rec.final_min;
        s.final_avg[u] = rec.final_avg;
    });
    return s;
}

std::vector<TrajectoryRecord> run_ensemble_records(RunConfig const& config, std::int64_t num_runs,
                                                   unsigned workers, RecordMode mode)
{
    if (num_runs < 1)
        throw std::invalid_argument("ensemble size N must be >= 1");
    config.validate();
    std::vector<TrajectoryRecord> out(static_cast<std::size_t>(num_runs));
    parallel_for(num_runs, workers, [&](std::int64_t i) {
        out[static_cast<std::size_t>(i)] = run_trajectory(config, i, mode);
    });
    return out;
}

//---------------------------------------------------------------------------//

std::pair<double, double> wilson_interval(std::int64_t k, std::int64_t n, double z)
{
    if (n <= 0 || k < 0 || k > n)
        throw std::invalid_argument("wilson_interval needs 0 <= k <= n and n > 0");
    double const nn = static_cast<double>(n);
    double const phat = static_cast<double>(k) / nn;
    double const z2 = z * z;
    double const denom = 1.0 + z2 / nn;
    double const centre = (phat + z2 / (2.0 * nn)) / denom;
    double const half = z * std::sqrt(phat * (1.0 - phat) / nn + z2 / (4.0 * nn * nn)) / denom;
    double lo = std::max(0.0, centre - half);
    double hi = std::min(1.0, centre + half);
    if (k == 0)
        lo = 0.0;
    if (k == n)
        hi = 1.0;
    return {lo, hi};
}

TailEstimate estimate_tail(EnsembleSummary const& summary, double epsilon,
                           std::span<std::int64_t const> t_grid)
{
    if (!(epsilon > 0.0))
        throw std::invalid_argument("epsilon must be positive");
    auto const& grid = summary.epsilon_grid;
    auto it = std::find_if(grid.begin(), grid.end(), [&](double e) {
        return std::abs(e - epsilon) <= 1e-12 * std::max(1.0, std::abs(epsilon));
    });
    if (it == grid.end())
        throw std::invalid_argument(
            fmt::format("epsilon {} was not in the simulated epsilon grid", epsilon));
    if (t_grid.empty())
        throw std::invalid_argument("t grid is empty");
    for (std::size_t i = 0; i < t_grid.size(); ++i)
    {
        if (t_grid[i] < 1 || t_grid[i] > summary.horizon)
            throw std::invalid_argument(
                fmt::format("t = {} lies outside [1, T = {}]", t_grid[i], summary.horizon));
        if (i > 0 && t_grid[i] <= t_grid[i - 1])
            throw std::invalid_argument("t grid must be strictly increasing");
    }
    auto const k = static_cast<std::size_t>(it - grid.begin());

    // Effective hitting times: never-hit and diverged runs count as exceeding forever.
    constexpr auto kInf = std::numeric_limits<std::int64_t>::max();
    std::vector<std::int64_t> h(static_cast<std::size_t>(summary.num_runs));
    for (std::int64_t r = 0; r < summary.num_runs; ++r)
    {
        auto const v = summary.hit(r, k);
        h[static_cast<std::size_t>(r)] =
            (summary.diverged[static_cast<std::size_t>(r)] || v == kNever) ? kInf : v;
    }
    std::sort(h.begin(), h.end());

    TailEstimate est;
    est.config_digest = summary.config_digest;
    est.num_runs = summary.num_runs;
    est.epsilon = *it;
    est.t_grid.assign(t_grid.begin(), t_grid.end());
    est.diverged_count = summary.diverged_count();
    for (auto t : t_grid)
    {
        // F_t > eps  <=>  hitting time > t
        auto const exceed = static_cast<std::int64_t>(h.end() - std::upper_bound(h.begin(), h.end(), t));
        auto const [lo, hi] = wilson_interval(exceed, summary.num_runs);
        double const p = static_cast<double>(exceed) / static_cast<double>(summary.num_runs);
        if (!est.p_hat.empty() && p > est.p_hat.back())
            throw std::logic_error("exceedance estimate increased in t");
        est.exceed_count.push_back(exceed);
        est.p_hat.push_back(p);
        est.ci_low.push_back(std::min(lo, p));
        est.ci_high.push_back(std::max(hi, p));
    }
    return est;
}

namespace {

DecayFit fit_one(TailEstimate const& tail, DecaySequence const& decay, std::string name)
{
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < tail.t_grid.size(); ++i)
    {
        if (tail.t_grid[i] < 3 || tail.exceed_count[i] < kMinExceedForFit || !(tail.p_hat[i] > 0.0))
            continue;
        xs.push_back(-decay(static_cast<double>(tail.t_grid[i])));
        ys.push_back(std::log(tail.p_hat[i]));
    }
    if (xs.size() < 3)
        throw InsufficientData(fmt::format(
            "only {} tail points with t >= 3 and at least {} exceedances; need 3", xs.size(),
            kMinExceedForFit));

    double const n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i)
    {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i)
    {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    DecayFit fit;
    fit.candidate = std::move(name);
    fit.points_used = static_cast<std::int64_t>(xs.size());
    fit.slope_hat = sxx > 0.0 ? sxy / sxx : 0.0;
    fit.intercept = my - fit.slope_hat * mx;
    if (syy == 0.0)
    {
        fit.r_squared = 1.0;
    }
    else
    {
        double ss_res = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i)
        {
            double const r = ys[i] - (fit.intercept + fit.slope_hat * xs[i]);
            ss_res += r * r;
        }
        fit.r_squared = 1.0 - ss_res / syy;
    }
    return fit;
}

}  // namespace

std::vector<DecayFit> fit_decay(TailEstimate const& tail, std::span<RateSpec const> candidates)
{
    std::vector<DecayFit> out;
    for (auto const& c : candidates)
        out.push_back(fit_one(tail, c.decay, c.name));
    return out;
}

std::vector<DecayFit> fit_decay(TailEstimate const& tail, std::span<DecaySequence const> decays,
                                std::span<std::string const> names)
{
    if (decays.size() != names.size())
        throw std::invalid_argument("fit_decay: one name per decay sequence");
    std::vector<DecayFit> out;
    for (std::size_t i = 0; i < decays.size(); ++i)
        out.push_back(fit_one(tail, decays[i], names[i]));
    return out;
}

//---------------------------------------------------------------------------//

std::vector<StuckProbability> appendix_f_enumeration(std::int64_t t_max,
                                                     TwoAtomInstance const& instance)
{
    if (t_max < 1 || t_max > 24)
        throw std::invalid_argument("enumeration horizon must lie in [1, 24]");
    double const r1 = norm(instance.x1);
    if (!(r1 > 0.0) || r1 > instance.G)
        throw std::invalid_argument("need 0 < |x1| <= G");

    HuberCost const cost(instance.G, instance.x1.size());
    ScheduleSpec const step = ScheduleSpec::sgd_sqrt(instance.a);

    auto key_of = [](Vec const& x) {
        std::vector<std::uint64_t> k(x.size());
        for (std::size_t i = 0; i < x.size(); ++i)
            k[i] = std::bit_cast<std::uint64_t>(x[i]);
        return k;
    };
    auto const stuck_key = key_of(instance.x1);

    // Live states keyed by exact bit pattern; weights are numerators over 2^(t-1).
    std::map<std::vector<std::uint64_t>, std::pair<Vec, std::uint64_t>> live;
    live.emplace(stuck_key, std::make_pair(instance.x1, std::uint64_t{1}));
    std::uint64_t escaped = 0;

    std::vector<StuckProbability> out;
    Vec grad(instance.x1.size()), g(instance.x1.size());
    for (std::int64_t t = 1;; ++t)
    {
        std::uint64_t total = escaped;
        std::uint64_t stuck = 0;
        for (auto const& [key, state] : live)
        {
            total += state.second;
            if (key == stuck_key)
                stuck = state.second;
        }
        std::uint64_t const denom = std::uint64_t{1} << (t - 1);
        if (total != denom)
            throw std::logic_error("enumeration lost probability mass");

        StuckProbability row;
        row.t = t;
        row.numerator = stuck;
        row.escaped_numerator = denom - stuck;
        row.probability = std::ldexp(static_cast<double>(stuck), static_cast<int>(1 - t));
        row.matches_closed_form = stuck == 1 && row.probability == std::ldexp(1.0, static_cast<int>(1 - t));
        out.push_back(row);
        if (t == t_max)
            break;

        double const alpha = step_size(step, t);
        std::optional<double> gamma;
        if (instance.clip)
            gamma = clip_threshold(*instance.clip, t);

        std::map<std::vector<std::uint64_t>, std::pair<Vec, std::uint64_t>> next;
        escaped *= 2;
        for (auto const& [key, state] : live)
        {
            auto const& [x, w] = state;
            cost.gradient_into(x, grad);
            for (double sign : {1.0, -1.0})
            {
                for (std::size_t i = 0; i < g.size(); ++i)
                    g[i] = grad[i] + sign * instance.x1[i];
                Vec y = x;
                apply_update(y, g, alpha, gamma);
                auto ky = key_of(y);
                // Moves stay on the line through x1 and a point strictly inside
                // the |x1| ball never gets back out, so it can never equal x1 again.
                if (ky != stuck_key && norm(y) < r1)
                {
                    escaped += w;
                    continue;
                }
                auto [pos, inserted] = next.try_emplace(std::move(ky), std::move(y), 0);
                pos->second.second += w;
            }
        }
        live = std::move(next);
    }
    return out;
}

}  // namespace ldplab
