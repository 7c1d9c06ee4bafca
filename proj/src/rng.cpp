#include "ganlab/rng.hpp"

#include <cmath>

namespace ganlab::engine {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

constexpr double kTwoPi = 6.283185307179586476925286766559;

}  // namespace

std::uint64_t hash_label(std::string_view label) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (char c : label) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001B3ULL;
    }
    return h;
}

std::uint64_t RngStream::next_u64() {
    return splitmix64(seed_ + 0x632BE59BD9B4E019ULL * ++counter_);
}

double RngStream::uniform01() {
    // 53-bit mantissa gives a uniform double in [0, 1).
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

double RngStream::normal() {
    if (has_cached_normal_) {
        has_cached_normal_ = false;
        return cached_normal_;
    }
    // Box-Muller on (0,1] x [0,1) uniforms.
    double u1 = 1.0 - uniform01();
    double u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    cached_normal_ = r * std::sin(kTwoPi * u2);
    has_cached_normal_ = true;
    return r * std::cos(kTwoPi * u2);
}

double RngStream::normal(double mean, double stddev) { return mean + stddev * normal(); }

double RngStream::laplace(double scale) {
    // Inverse CDF: u in (-1/2, 1/2), x = -b * sgn(u) * ln(1 - 2|u|).
    double u = uniform01() - 0.5;
    double s = (u < 0.0) ? -1.0 : 1.0;
    double a = std::abs(u);
    if (a >= 0.5) a = 0.49999999999999994;  // guard the open endpoint
    return -scale * s * std::log(1.0 - 2.0 * a);
}

std::uint64_t RngStream::uniform_index(std::uint64_t n) {
    if (n == 0) return 0;
    // Rejection sampling removes modulo bias.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x = next_u64();
    while (x >= limit) x = next_u64();
    return x % n;
}

RngStream RngStream::child(std::uint64_t index) const {
    return RngStream(splitmix64(seed_ ^ splitmix64(index + 0x9E3779B97F4A7C15ULL)));
}

RngStream RngStream::child(std::string_view label, std::uint64_t index) const {
    return RngStream(splitmix64(seed_ ^ hash_label(label) ^ splitmix64(index)));
}

}  // namespace ganlab::engine
