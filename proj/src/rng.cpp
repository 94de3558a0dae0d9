#include "greencell/rng.hpp"

#include <cmath>
#include <numbers>

namespace greencell {

std::uint64_t hash_label(std::string_view label) noexcept
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : label) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t mix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t parent, std::string_view label) noexcept
{
    return mix64(mix64(parent) ^ hash_label(label));
}

std::uint64_t derive_seed(std::uint64_t parent, std::string_view label, std::uint64_t index) noexcept
{
    return mix64(derive_seed(parent, label) ^ mix64(index));
}

double standard_normal(std::uint64_t key) noexcept
{
    // u1 in (0, 1] keeps the log finite.
    const double u1 = 1.0 - to_unit(mix64(key ^ 0x5851f42d4c957f2dULL));
    const double u2 = to_unit(mix64(key ^ 0x14057b7ef767814fULL));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

} // namespace greencell
