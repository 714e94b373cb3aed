#pragma once

#include <cmath>
#include <cstdint>

namespace couplab {

/// Counter-based stream RNG (splitmix64 finalizer over key + counter).
///
/// Every stream is a pure function of (key, counter), so derived streams are
/// reproducible regardless of worker scheduling. `derive` hashes an id into a
/// fresh key; chains of derives address (seed, episode, block, trial, ...).
class Rng {
public:
    explicit Rng(uint64_t key) : key_(key) {}

    static Rng from_seed(uint64_t seed) { return Rng(mix64(seed ^ 0x9E3779B97F4A7C15ull)); }

    /// Independent stream addressed by id. Does not disturb this stream.
    Rng derive(uint64_t id) const { return Rng(mix64(key_ ^ mix64(id + 0xD6E8FEB86659FD93ull))); }

    uint64_t next_u64() { return mix64(key_ + 0x9E3779B97F4A7C15ull * ++counter_); }

    /// Uniform in [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + uniform01() * (b - a); }

    /// Integer in [0, n).
    uint64_t below(uint64_t n) { return next_u64() % n; }

    /// Standard normal via Box-Muller (pair cached).
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform01();
        double u2 = uniform01();
        double r = std::sqrt(-2.0 * std::log1p(-u1));
        double th = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(th);
        have_spare_ = true;
        return r * std::cos(th);
    }

    static uint64_t mix64(uint64_t z) {
        z += 0x9E3779B97F4A7C15ull;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

private:
    uint64_t key_;
    uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// Stream ids used when deriving from a master seed. Centralized so that the
// address of every random draw in the suite is stable.
namespace stream {
inline constexpr uint64_t episode = 0x01;
inline constexpr uint64_t block = 0x02;
inline constexpr uint64_t trial = 0x03;
inline constexpr uint64_t calibrate = 0x04;
inline constexpr uint64_t assert_run = 0x05;
inline constexpr uint64_t direct = 0x06;
} // namespace stream

} // namespace couplab
