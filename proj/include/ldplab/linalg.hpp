// Copyright 2026 The ldplab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace ldplab {

using Vec = std::vector<double>;

inline double dot(std::span<double const> a, std::span<double const> b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

inline double norm_sq(std::span<double const> a) { return dot(a, a); }

inline double norm(std::span<double const> a) { return std::sqrt(norm_sq(a)); }

/// y += alpha * x
inline void axpy(double alpha, std::span<double const> x, std::span<double> y)
{
    for (std::size_t i = 0; i < x.size(); ++i)
        y[i] += alpha * x[i];
}

inline void require_dim(std::span<double const> x, std::size_t dim, char const* what)
{
    if (x.size() != dim)
        throw std::invalid_argument(std::string(what) + ": dimension mismatch (expected " +
                                    std::to_string(dim) + ", got " + std::to_string(x.size()) +
                                    ")");
}

inline bool all_finite(std::span<double const> x)
{
    for (double v : x)
        if (!std::isfinite(v))
            return false;
    return true;
}

}  // namespace ldplab
