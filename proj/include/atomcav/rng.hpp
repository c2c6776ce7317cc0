#ifndef ATOMCAV_RNG_HPP
#define ATOMCAV_RNG_HPP

#include <cstdint>
#include <cmath>
#include <stdexcept>

namespace atomcav {

// Counter-based pseudo-random stream (splitmix64 core).
//
// A stream is fully determined by (master_seed, stream_id), so independent
// trials can draw from their own streams and produce identical results no
// matter which order (or thread) evaluates them. All derived draws
// (uniform, bernoulli, gaussian) are computed from the raw 64-bit output
// with fixed arithmetic, so sequences are identical across platforms.
class RngStream {
public:
    explicit RngStream(std::uint64_t master_seed, std::uint64_t stream_id = 0)
        : state_(mix(master_seed + kGamma) ^
                 mix(stream_id * kGamma + 0x632BE59BD9B4E019ULL)) {}

    std::uint64_t next_u64() {
        state_ += kGamma;
        return mix(state_);
    }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) {
        if (p < 0.0 || p > 1.0)
            throw std::domain_error("bernoulli: p must lie in [0, 1]");
        return uniform01() < p;
    }

    // Standard normal via Box-Muller; the paired value is cached.
    double gaussian() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        const double u1 = 1.0 - uniform01();  // (0, 1], keeps log() finite
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * kPi * u2;
        cached_ = r * std::sin(a);
        have_cached_ = true;
        return r * std::cos(a);
    }

    double gaussian(double mean, double sigma) {
        return mean + sigma * gaussian();
    }

private:
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
    static constexpr double kPi = 3.14159265358979323846;

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

}  // namespace atomcav

#endif
