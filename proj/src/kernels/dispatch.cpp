#include "oppsim/kernels.hpp"

#include <atomic>
#include <stdexcept>

namespace oppsim::kernels {

namespace detail {

bool avx2_available() {
#if defined(OPPSIM_HAVE_AVX2_KERNELS) && (defined(__x86_64__) || defined(__i386__))
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

#if !defined(OPPSIM_HAVE_AVX2_KERNELS)
double sum_avx2(std::span<const double>) {
    throw std::runtime_error("AVX2 kernels not built");
}
ThresholdStats threshold_stats_avx2(std::span<const double>, double) {
    throw std::runtime_error("AVX2 kernels not built");
}
#endif

} // namespace detail

namespace {

std::atomic<Impl> g_impl{Impl::Auto};

inline bool use_avx2() {
    switch (g_impl.load(std::memory_order_relaxed)) {
    case Impl::Scalar:
        return false;
    case Impl::Avx2:
        return true;
    case Impl::Auto:
    default: {
        static const bool ok = detail::avx2_available();
        return ok;
    }
    }
}

} // namespace

void set_impl(Impl impl) {
    if (impl == Impl::Avx2 && !detail::avx2_available())
        throw std::runtime_error("set_impl: AVX2 requested but not available");
    g_impl.store(impl, std::memory_order_relaxed);
}

Impl active_impl() { return g_impl.load(std::memory_order_relaxed); }

std::string_view impl_name() { return use_avx2() ? "avx2" : "scalar"; }

double sum(std::span<const double> values) {
    return use_avx2() ? detail::sum_avx2(values) : detail::sum_scalar(values);
}

ThresholdStats threshold_stats(std::span<const double> values, double t) {
    return use_avx2() ? detail::threshold_stats_avx2(values, t)
                      : detail::threshold_stats_scalar(values, t);
}

} // namespace oppsim::kernels
