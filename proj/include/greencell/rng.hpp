#ifndef GREENCELL_RNG_HPP
#define GREENCELL_RNG_HPP

#include <cstdint>
#include <random>
#include <string_view>

namespace greencell {

// Labeled random streams.
//
// Every random quantity in a snapshot is drawn from a stream whose seed is
// derived from (parent seed, label) by hashing. Two draws with different
// labels never share state, so adding a receive point to a scenario leaves
// every other draw bit-identical.

/// 64-bit FNV-1a over the bytes of a label.
std::uint64_t hash_label(std::string_view label) noexcept;

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Child seed for a labeled sub-stream.
std::uint64_t derive_seed(std::uint64_t parent, std::string_view label) noexcept;
std::uint64_t derive_seed(std::uint64_t parent, std::string_view label, std::uint64_t index) noexcept;

/// Maps 64 random bits to a double in [0, 1).
inline double to_unit(std::uint64_t bits) noexcept
{
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Standard normal variate fully determined by `key` (counter-based Box-Muller).
double standard_normal(std::uint64_t key) noexcept;

/// Sequential stream for drops. mt19937_64 output is fixed by the standard,
/// and the distribution helpers below avoid the implementation-defined
/// std::*_distribution algorithms.
class Stream
{
public:
    explicit Stream(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return to_unit(engine_()); }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    bool bernoulli(double p) { return uniform() < p; }

private:
    std::mt19937_64 engine_;
};

} // namespace greencell

#endif
