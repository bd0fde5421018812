// Counter-based deterministic random source. Every draw is a pure function of
// (seed, stream, counter, lane), so ensembles are reproducible independent of
// scheduling or evaluation order: trajectory k uses stream k, auxiliary chains
// use a labelled stream.
#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>
#include <utility>

namespace qtraj {

namespace detail {

// SplitMix64 finalizer: good avalanche, cheap, stateless.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (const char c : s) {
        h ^= static_cast<std::uint64_t>(static_cast<unsigned char>(c));
        h *= 0x100000001B3ULL;
    }
    return h;
}

}  // namespace detail

class CounterRng {
  public:
    CounterRng(std::uint64_t seed, std::uint64_t stream)
        : base_(detail::mix64(detail::mix64(seed) ^ detail::mix64(stream ^ 0xA5A5A5A5A5A5A5A5ULL))) {}

    static CounterRng for_trajectory(std::uint64_t seed, std::uint64_t trajectory_index) {
        return CounterRng(seed, trajectory_index);
    }

    static CounterRng for_label(std::uint64_t seed, std::string_view label) {
        return CounterRng(seed, detail::fnv1a(label));
    }

    std::uint64_t word(std::uint64_t counter, std::uint64_t lane) const {
        return detail::mix64(base_ ^ detail::mix64(counter * 0x9E3779B97F4A7C15ULL + lane));
    }

    /// uniform in [0, 1), 53-bit resolution
    double uniform(std::uint64_t counter, std::uint64_t lane = 2) const {
        return static_cast<double>(word(counter, lane) >> 11) * 0x1.0p-53;
    }

    /// Box-Muller pair of independent N(0,1) draws from lanes 0 and 1.
    std::pair<double, double> normal_pair(std::uint64_t counter) const {
        // u1 in (0,1] so the log is finite
        const double u1 = static_cast<double>((word(counter, 0) >> 11) + 1) * 0x1.0p-53;
        const double u2 = static_cast<double>(word(counter, 1) >> 11) * 0x1.0p-53;
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        return {r * std::cos(a), r * std::sin(a)};
    }

    /// first element of the Box-Muller pair
    double normal(std::uint64_t counter) const { return normal_pair(counter).first; }

  private:
    std::uint64_t base_;
};

}  // namespace qtraj
