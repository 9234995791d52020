#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace oppsim {

// Raised for invalid run configurations (maps to CLI exit code 1).
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised when two routes to the same exact quantity disagree.
struct internal_consistency_error : std::logic_error {
    using std::logic_error::logic_error;
};

inline std::vector<double> logspace(double lo, double hi, std::size_t count) {
    if (!(lo > 0.0) || !(hi >= lo) || count < 2)
        throw std::invalid_argument("logspace: need 0 < lo <= hi and count >= 2");
    std::vector<double> out(count);
    const double llo = std::log(lo), lhi = std::log(hi);
    for (std::size_t i = 0; i < count; ++i)
        out[i] = std::exp(llo + (lhi - llo) * static_cast<double>(i) / static_cast<double>(count - 1));
    out.front() = lo;
    out.back() = hi;
    return out;
}

} // namespace oppsim
