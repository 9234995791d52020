#pragma once

#include <cmath>
#include <cstdint>
#include <span>

#include "oppsim/util.hpp"

namespace oppsim {

// Truncation levels t_n = n^gamma and trim counts r_n = ceil(beta * n^(1-gamma)).
struct TrimPlan {
    double gamma = 0.4;
    double beta = 1.0;

    TrimPlan() = default;
    TrimPlan(double g, double b) : gamma(g), beta(b) {
        if (!(gamma > 0.0) || !(gamma < 0.5))
            throw config_error("plan: gamma must lie in (0, 1/2)");
        if (!(beta > 0.0) || !std::isfinite(beta))
            throw config_error("plan: beta must be positive and finite");
    }

    double truncation_level(std::int64_t n) const {
        return std::pow(static_cast<double>(n), gamma);
    }

    std::int64_t trim_count(std::int64_t n) const {
        return static_cast<std::int64_t>(
            std::ceil(beta * std::pow(static_cast<double>(n), 1.0 - gamma)));
    }

    // r_n < n must hold at every grid point (r_n -> infinity and r_n/n -> 0
    // then follow from 0 < gamma < 1/2).
    void validate_for_grid(std::span<const std::int64_t> n_grid) const {
        for (std::int64_t n : n_grid) {
            if (n < 2)
                throw config_error("plan: grid points must be >= 2");
            if (trim_count(n) >= n)
                throw config_error("plan: trim count r(n) >= n at n = " + std::to_string(n));
        }
    }
};

} // namespace oppsim
