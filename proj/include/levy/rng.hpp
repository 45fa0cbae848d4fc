#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace levy {

/// Philox4x32-10 block function.
inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> c,
                                               std::array<std::uint32_t, 2> k) {
    constexpr std::uint64_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
    constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = M0 * c[0];
        const std::uint64_t p1 = M1 * c[2];
        c = {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0], static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1], static_cast<std::uint32_t>(p0)};
        k[0] += W0;
        k[1] += W1;
    }
    return c;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Counter-based stream identified by a root seed and a derivation path.
/// Same (seed, path) gives the same variates; child(i) appends i to the path.
class SeedStream {
public:
    explicit SeedStream(std::uint64_t seed, std::vector<std::uint64_t> path = {})
        : seed_(seed), path_(std::move(path)) {
        std::uint64_t h = splitmix64(seed_);
        for (std::uint64_t p : path_) h = splitmix64(h ^ splitmix64(p + 0x632BE59BD9B4E019ull));
        key_ = {static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
        const std::uint64_t tag = splitmix64(h);
        hi_ = {static_cast<std::uint32_t>(tag), static_cast<std::uint32_t>(tag >> 32)};
    }

    SeedStream child(std::uint64_t i) const {
        auto p = path_;
        p.push_back(i);
        return SeedStream(seed_, std::move(p));
    }

    std::uint64_t seed() const noexcept { return seed_; }
    const std::vector<std::uint64_t>& path() const noexcept { return path_; }

    std::uint64_t next_u64() {
        if (avail_ == 0) refill();
        return buf_[--avail_];
    }

    /// Uniform on the open interval (0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53 + 0x1.0p-54; }

private:
    void refill() {
        auto out = philox4x32({static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                               hi_[0], hi_[1]},
                              key_);
        ++block_;
        buf_[1] = (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
        buf_[0] = (static_cast<std::uint64_t>(out[2]) << 32) | out[3];
        avail_ = 2;
    }

    std::uint64_t seed_;
    std::vector<std::uint64_t> path_;
    std::array<std::uint32_t, 2> key_{};
    std::array<std::uint32_t, 2> hi_{};
    std::uint64_t block_ = 0;
    std::array<std::uint64_t, 2> buf_{};
    int avail_ = 0;
};

}  // namespace levy
