// AVX2 variants of the summation/threshold kernels. Four independent
// Neumaier lanes, merged through a scalar compensated accumulator at the
// end; counts come from compare-mask popcounts.

#include "oppsim/kernels.hpp"

#if defined(__AVX2__)

#include <immintrin.h>

namespace oppsim::kernels::detail {

namespace {

struct LaneAccumulator {
    __m256d sum = _mm256_setzero_pd();
    __m256d comp = _mm256_setzero_pd();

    inline void add(__m256d v) {
        const __m256d t = _mm256_add_pd(sum, v);
        const __m256d abs_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
        const __m256d as = _mm256_and_pd(sum, abs_mask);
        const __m256d av = _mm256_and_pd(v, abs_mask);
        const __m256d sum_bigger = _mm256_cmp_pd(as, av, _CMP_GE_OQ);
        const __m256d big = _mm256_blendv_pd(v, sum, sum_bigger);
        const __m256d small = _mm256_blendv_pd(sum, v, sum_bigger);
        comp = _mm256_add_pd(comp, _mm256_add_pd(_mm256_sub_pd(big, t), small));
        sum = t;
    }

    // Fixed-order merge keeps results deterministic on a given machine.
    inline void drain(NeumaierAccumulator& out) const {
        alignas(32) double s[4], c[4];
        _mm256_store_pd(s, sum);
        _mm256_store_pd(c, comp);
        for (int i = 0; i < 4; ++i)
            out.add(s[i]);
        for (int i = 0; i < 4; ++i)
            out.add(c[i]);
    }
};

} // namespace

double sum_avx2(std::span<const double> values) {
    const double* p = values.data();
    const std::size_t n = values.size();
    const std::size_t n4 = n / 4 * 4;
    LaneAccumulator lanes;
    for (std::size_t i = 0; i < n4; i += 4)
        lanes.add(_mm256_loadu_pd(p + i));
    NeumaierAccumulator acc;
    lanes.drain(acc);
    for (std::size_t i = n4; i < n; ++i)
        acc.add(p[i]);
    return acc.value();
}

ThresholdStats threshold_stats_avx2(std::span<const double> values, double t) {
    const double* p = values.data();
    const std::size_t n = values.size();
    const std::size_t n4 = n / 4 * 4;
    const __m256d vt = _mm256_set1_pd(t);
    LaneAccumulator le, gt;
    std::int64_t n_gt = 0, n_ge = 0;
    for (std::size_t i = 0; i < n4; i += 4) {
        const __m256d x = _mm256_loadu_pd(p + i);
        const __m256d m_gt = _mm256_cmp_pd(x, vt, _CMP_GT_OQ);
        const __m256d m_ge = _mm256_cmp_pd(x, vt, _CMP_GE_OQ);
        const __m256d m_le = _mm256_cmp_pd(x, vt, _CMP_LE_OQ);
        le.add(_mm256_and_pd(x, m_le));
        gt.add(_mm256_and_pd(x, m_gt));
        n_gt += __builtin_popcount(static_cast<unsigned>(_mm256_movemask_pd(m_gt)));
        n_ge += __builtin_popcount(static_cast<unsigned>(_mm256_movemask_pd(m_ge)));
    }
    NeumaierAccumulator le_acc, gt_acc;
    le.drain(le_acc);
    gt.drain(gt_acc);
    for (std::size_t i = n4; i < n; ++i) {
        const double v = p[i];
        if (v > t) {
            gt_acc.add(v);
            ++n_gt;
            ++n_ge;
        } else {
            le_acc.add(v);
            if (v == t)
                ++n_ge;
        }
    }
    return ThresholdStats{le_acc.value(), gt_acc.value(), n_gt, n_ge};
}

} // namespace oppsim::kernels::detail

#endif // __AVX2__
