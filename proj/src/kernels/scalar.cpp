#include "oppsim/kernels.hpp"

namespace oppsim::kernels::detail {

double sum_scalar(std::span<const double> values) {
    NeumaierAccumulator acc;
    for (double v : values)
        acc.add(v);
    return acc.value();
}

ThresholdStats threshold_stats_scalar(std::span<const double> values, double t) {
    NeumaierAccumulator le, gt;
    std::int64_t n_gt = 0, n_ge = 0;
    for (double v : values) {
        if (v > t) {
            gt.add(v);
            ++n_gt;
            ++n_ge;
        } else {
            le.add(v);
            if (v == t)
                ++n_ge;
        }
    }
    return ThresholdStats{le.value(), gt.value(), n_gt, n_ge};
}

} // namespace oppsim::kernels::detail
