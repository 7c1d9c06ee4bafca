#pragma once

#include <cstdint>
#include <string_view>

namespace ganlab::engine {

// Deterministic counter-based random stream (splitmix64 core). The sequence
// is a pure function of the 64-bit seed, so runs replay identically on any
// platform. Distribution transforms are hand-rolled for the same reason:
// the standard library leaves <random> distributions implementation-defined.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed = 0) : seed_(seed), counter_(0) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t counter() const { return counter_; }

    std::uint64_t next_u64();
    double uniform01();                       // [0, 1)
    double uniform(double lo, double hi);     // [lo, hi)
    double normal();                          // standard normal, Box-Muller
    double normal(double mean, double stddev);
    double laplace(double scale);             // mean 0, inverse-CDF sampling
    std::uint64_t uniform_index(std::uint64_t n);  // {0, ..., n-1}, unbiased

    // Independent substream for (seed, label, index); used so that parallel
    // repetitions draw from disjoint deterministic streams.
    RngStream child(std::uint64_t index) const;
    RngStream child(std::string_view label, std::uint64_t index = 0) const;

private:
    std::uint64_t seed_;
    std::uint64_t counter_;
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

// FNV-1a, used to derive child-stream labels.
std::uint64_t hash_label(std::string_view label);

}  // namespace ganlab::engine
