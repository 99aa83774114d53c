// rng.hpp — seed-splittable random streams
//
// Every randomized operation draws from an RngStream constructed from
// (seed, stream); child streams are derived with splitmix64 so parallel
// callers never share generator state. Identical (seed, stream) yields an
// identical byte sequence on repeated runs.

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace asymcoh {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

class RngStream {
public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0)
        : root_(derive(seed, stream)), engine_(root_) {}

    static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
        return splitmix64(splitmix64(seed + 0x1f123bb5159a55e5ULL) ^
                          (0x632be59bd9b4e019ULL * (stream + 1)));
    }

    // Independent child stream; does not advance this stream's state.
    RngStream child(std::uint64_t stream) const { return RngStream(root_, stream + 1); }

    std::uint64_t raw() { return engine_(); }

    // Uniform on [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Standard normal via Box-Muller; one spare cached per pair.
    double gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform(); // (0, 1]
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(t);
        has_spare_ = true;
        return r * std::cos(t);
    }

    // Uniform integer in [0, n).
    std::uint64_t uniform_index(std::uint64_t n) {
        return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_);
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::uint64_t root_;
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

} // namespace asymcoh
