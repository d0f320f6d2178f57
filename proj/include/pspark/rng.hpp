#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace pspark {

// splitmix64 finalizer; used to mix seeds and derive stream keys.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Deterministic replayable random stream keyed by (master_seed, stream_id).
// Equal keys replay the same sequence on every platform: mt19937_64 is fully
// specified by the standard, and bounded draws below use explicit rejection
// instead of std::uniform_int_distribution (which is implementation-defined).
class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_id)
        : master_(master_seed),
          id_(stream_id),
          gen_(mix64(mix64(master_seed) ^ mix64(~stream_id))) {}

    std::uint64_t master_seed() const { return master_; }
    std::uint64_t stream_id() const { return id_; }

    // Derived stream: a pure function of this stream's key, not of its state.
    RngStream substream(std::uint64_t offset) const {
        return RngStream(master_, mix64(id_ ^ mix64(offset ^ 0x51ed2701a3c9b5d7ULL)));
    }

    std::uint64_t next_u64() { return gen_(); }

    // Uniform in [0, n), n > 0, by rejection on the top range.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = gen_();
        } while (x >= limit);
        return x % n;
    }

    std::int64_t range(std::int64_t lo, std::int64_t hi_inclusive) {
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi_inclusive - lo + 1)));
    }

    // Uniform in [0, 1) with 53 random bits.
    double unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[static_cast<std::size_t>(below(i))]);
        }
    }

private:
    std::uint64_t master_;
    std::uint64_t id_;
    std::mt19937_64 gen_;
};

}  // namespace pspark
