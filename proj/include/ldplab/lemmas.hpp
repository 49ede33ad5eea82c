// Copyright 2026 The ldplab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ldplab/oracles.hpp"

namespace ldplab {

enum class LemmaSuite
{
    MgfBounded,    ///< E exp(|z|^2 / M^2) <= e
    MgfInner,      ///< E exp(<x, z>) <= exp(3 M^2 |x|^2 / 4)
    ClipBias,      ///< |E clip(g) - grad f| <= 4 sigma^p gamma^(1-p)
    ClipSubgauss,  ///< centred clipped gradient is sub-Gaussian with 3 gamma^2
    BatchBound,    ///< |g - grad f| <= 2 G_l for the subsampling oracle
};

std::string_view to_string(LemmaSuite suite);
LemmaSuite lemma_suite_from_string(std::string_view name);

struct LemmaParams
{
    std::shared_ptr<Oracle const> oracle;
    Vec x;  ///< query point; defaults to the origin

    /// MgfInner: |x| values, in units of 1/M, crossing 4/3.
    std::vector<double> inner_norms{0.1, 1.0, 4.0 / 3.0, 2.0, 5.0};
    std::size_t num_directions = 8;

    /// ClipBias / ClipSubgauss
    double p = 2.0;
    std::vector<double> gammas{4.0};
    /// When set, gamma is the general-C threshold at iteration `t` instead of
    /// the `gammas` list; t must be at least the burn-in.
    std::optional<double> general_C;
    std::int64_t t = 1;

    std::size_t num_samples = 1'000'000;
    std::uint64_t seed = 0x1e44a;
    double slack_se = 5.0;  ///< statistical slack in standard errors
};

struct LemmaCheck
{
    std::string label;
    double empirical = 0.0;
    double bound = 0.0;
    double standard_error = 0.0;
    double slack = 0.0;  ///< (bound - empirical) / SE, or bound - empirical when SE = 0
    std::int64_t violations = 0;
    bool pass = false;
};

struct LemmaReport
{
    LemmaSuite suite;
    std::vector<LemmaCheck> checks;
    bool pass = false;
};

/// Runs the Monte Carlo check for one lemma. Throws PreconditionViolation when
/// the lemma does not apply (for example |grad f(x)| > gamma/2, an unbounded
/// noise model for the sub-Gaussian checks, or t below the general-C burn-in).
LemmaReport verify_lemma_suite(LemmaSuite suite, LemmaParams const& params);

}  // namespace ldplab
