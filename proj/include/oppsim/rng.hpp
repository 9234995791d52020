#pragma once

#include <cstdint>
#include <utility>

namespace oppsim {

// Counter-based generator (philox2x64, 10 rounds). Streams are indexed by
// (seed, stream_id); a stream's output depends only on its own counter, so
// any number of streams can be drawn concurrently and the sequence is
// independent of scheduling.
struct Philox2x64 {
    static std::pair<std::uint64_t, std::uint64_t> block(std::uint64_t key, std::uint64_t ctr_hi,
                                                         std::uint64_t ctr_lo);
};

class RngStream {
  public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id)
        : seed_(seed), stream_(stream_id) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_; }

    std::uint64_t next_u64();

    // Uniform on the open interval (0,1): ((x >> 11) + 0.5) * 2^-53.
    // Never returns 0 or 1, so tail inversion needs no resampling.
    double next_unit() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

  private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t counter_ = 0;
    std::uint64_t spare_ = 0;
    bool has_spare_ = false;
};

} // namespace oppsim
