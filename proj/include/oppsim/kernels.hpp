#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string_view>

// Data-parallel inner loops shared by the trimming/truncation statistics:
// compensated sums and threshold classification over large value arrays.
// A scalar reference implementation always exists; an AVX2 variant is
// selected at runtime when the CPU supports it. The two are equivalence-
// tested against each other (exact on integer-valued input, last-ulp
// tolerance otherwise, since lane-split compensation reorders additions).

namespace oppsim::kernels {

// Neumaier-compensated accumulator. Safe when summand magnitude exceeds the
// running sum, which heavy-tailed data does routinely.
struct NeumaierAccumulator {
    double sum = 0.0;
    double comp = 0.0;

    void add(double v) {
        const double t = sum + v;
        if (std::fabs(sum) >= std::fabs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    }

    double value() const { return sum + comp; }
};

// One pass over `values` classified against threshold `t`.
struct ThresholdStats {
    double sum_le = 0.0;        // sum of values <= t (compensated)
    double sum_gt = 0.0;        // sum of values >  t (compensated)
    std::int64_t count_gt = 0;  // #{v > t}
    std::int64_t count_ge = 0;  // #{v >= t}
};

enum class Impl { Auto, Scalar, Avx2 };

// Forces a specific implementation for the dispatching entry points below.
// Auto re-probes CPU support; Avx2 throws if unsupported. Test hook.
void set_impl(Impl impl);
Impl active_impl();
std::string_view impl_name();

double sum(std::span<const double> values);
ThresholdStats threshold_stats(std::span<const double> values, double t);

namespace detail {
double sum_scalar(std::span<const double> values);
ThresholdStats threshold_stats_scalar(std::span<const double> values, double t);
bool avx2_available();
double sum_avx2(std::span<const double> values);
ThresholdStats threshold_stats_avx2(std::span<const double> values, double t);
} // namespace detail

} // namespace oppsim::kernels
