#include "oppsim/rng.hpp"

namespace oppsim {

namespace {

constexpr std::uint64_t kMultiplier = 0xD2B74407B1CE6E93ULL;
constexpr std::uint64_t kKeyBump = 0x9E3779B97F4A7C15ULL;

inline void philox_round(std::uint64_t& x0, std::uint64_t& x1, std::uint64_t key) {
    const unsigned __int128 prod = static_cast<unsigned __int128>(kMultiplier) * x0;
    const std::uint64_t hi = static_cast<std::uint64_t>(prod >> 64);
    const std::uint64_t lo = static_cast<std::uint64_t>(prod);
    x0 = hi ^ key ^ x1;
    x1 = lo;
}

} // namespace

std::pair<std::uint64_t, std::uint64_t> Philox2x64::block(std::uint64_t key, std::uint64_t ctr_hi,
                                                          std::uint64_t ctr_lo) {
    std::uint64_t x0 = ctr_hi, x1 = ctr_lo;
    for (int r = 0; r < 10; ++r)
        philox_round(x0, x1, key + static_cast<std::uint64_t>(r) * kKeyBump);
    return {x0, x1};
}

std::uint64_t RngStream::next_u64() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const auto [a, b] = Philox2x64::block(seed_, stream_, counter_++);
    spare_ = b;
    has_spare_ = true;
    return a;
}

} // namespace oppsim
