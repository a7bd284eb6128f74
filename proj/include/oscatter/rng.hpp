#pragma once

#include <cstdint>

namespace oscatter {

// Counter-keyed SplitMix64 stream: stream (seed, index) is a pure function of
// its key, so any partition of shots across workers replays identically.
class RngStream {
  public:
    RngStream(std::uint64_t seed, std::uint64_t stream_index)
        : seed_(seed), index_(stream_index) {
        state_ = mix(seed ^ mix(stream_index + 0x9e3779b97f4a7c15ull));
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_index() const { return index_; }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ull;
        return mix(state_);
    }
    // uniform in [0, 1)
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    std::uint64_t seed_, index_, state_;
};

}  // namespace oscatter
